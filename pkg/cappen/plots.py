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

"""Static images of a sweep. matplotlib is an optional dependency."""
from __future__ import unicode_literals

import logging
import os

from cappen import lexicon

LOGGER = logging.getLogger("cappen.plots")


def _pyplot():
    try:
        import matplotlib
        matplotlib.use("Agg")
        from matplotlib import pyplot
    except ImportError:
        LOGGER.warning("matplotlib is not installed; no plots written.")
        return None
    return pyplot


def plot_sweep(records, directory, mass=None):
    """Writes m_f against t and upsilon against s. Returns the paths."""
    plt = _pyplot()
    if plt is None or not records:
        return []

    t = [r.t for r in records]
    written = []

    fig, ax = plt.subplots(figsize=(6, 4))
    ax.plot(t, [r.mf for r in records], "o-", label="$m_f$")
    if mass is not None:
        ax.axhline(mass, color="k", lw=0.8, ls="--", label="$m$")
    ax.set_xlabel("t")
    ax.set_ylabel("free energy mass")
    ax.grid(alpha=0.25)
    ax.legend(loc="best")
    path = os.path.join(directory, lexicon.PLOT_MF)
    fig.savefig(path, dpi=120)
    plt.close(fig)
    written.append(path)

    fig, ax = plt.subplots(figsize=(6, 4))
    ax.plot([r.lateral_area for r in records], [r.area for r in records],
            "o-")
    ax.set_xlabel("s = |S($\\Sigma_t$)|")
    ax.set_ylabel("$\\upsilon$ = |$\\Sigma_t$|")
    ax.grid(alpha=0.25)
    path = os.path.join(directory, lexicon.PLOT_PROFILE)
    fig.savefig(path, dpi=120)
    plt.close(fig)
    written.append(path)

    if LOGGER.isEnabledFor(logging.INFO):
        LOGGER.info("Wrote %s", ", ".join(written))
    return written
