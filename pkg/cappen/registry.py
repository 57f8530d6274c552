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

"""Various registries."""
from __future__ import unicode_literals

# Global registry of support surface factories, keyed by surface.kind. Each
# factory takes the parsed configuration and returns a SupportSurface.
SURFACE_KIND_MAP = {}

# Registry of axisymmetric profile factories, keyed by surface.profile.
PROFILE_MAP = {}
