from __future__ import unicode_literals

from ._version import get_versions
__version__ = get_versions()['pep440']
