# Copyright 2026 The cappen Authors. All rights reserved.
#
# Licensed under the Apache License, Version 2.0 (the "License"); you may not
# use this file except in compliance with the License.  You may obtain a copy of
# the License at
#
# http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS, WITHOUT
# WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.  See the
# License for the specific language governing permissions and limitations under
# the License.

"""This module installs the cappen library and the capillary-penrose tool."""

import re

from setuptools import setup

try:
    with open('README.md') as file:
        long_description = file.read()
except IOError:
    long_description = (
        'Capillary surfaces, free energy mass and the extrinsic Penrose '
        'inequality.')

# version.yaml is read without yaml, which may not be installed yet.
with open('version.yaml') as f:
    VERSION = re.search(r"^\s+version: '([^']+)'", f.read(), re.M).group(1)

with open('requirements.txt') as f:
    requirements = [line for line in f.read().splitlines() if line.strip()]

setup(
    name='cappen',
    long_description=long_description,
    long_description_content_type="text/markdown",
    version=VERSION,
    description='Capillary surfaces and the extrinsic Penrose inequality.',
    author='The cappen Authors',
    packages=['cappen'],
    package_dir={"cappen": "cappen"},
    install_requires=requirements,
    extras_require=dict(
        plots="matplotlib"
    ),
    entry_points={
        "console_scripts": [
            "capillary-penrose = cappen.cli:main",
        ],
    },
)
