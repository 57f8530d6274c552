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

"""The package version, from version.yaml next to the package if present."""
import os
import subprocess

import yaml

MY_DIR = os.path.dirname(os.path.abspath(__file__))

# Used when version.yaml is not shipped alongside the package.
RAW_VERSION = {"version": "0.1", "post": "0", "rc": "0"}


def raw_versions(version_file="version.yaml"):
    path = os.path.join(os.path.dirname(MY_DIR), version_file)
    try:
        with open(path) as fd:
            return dict(yaml.safe_load(fd)["version_data"])
    except (IOError, OSError, KeyError, TypeError, yaml.YAMLError):
        return dict(RAW_VERSION)


def get_current_git_hash():
    try:
        return subprocess.check_output(
            ["git", "log", "--no-merges", "-n", "1", "--pretty=format:%H"],
            stderr=subprocess.PIPE, cwd=MY_DIR,
        ).decode("utf-8").strip() or None
    except (OSError, subprocess.CalledProcessError):
        return None


def tag_version_data(version_data):
    current_hash = get_current_git_hash()
    if current_hash is not None:
        version_data["revisionid"] = current_hash

    pep440 = version_data["version"]
    if int(version_data.get("post", 0)) > 0:
        pep440 += ".post" + str(version_data["post"])
    elif int(version_data.get("rc", 0)) > 0:
        pep440 += "rc" + str(version_data["rc"])
    version_data["pep440"] = pep440
    return version_data


def get_versions():
    return tag_version_data(raw_versions())
