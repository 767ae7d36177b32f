# SPDX-License-Identifier: Apache-2.0
"""Bistatic backscatter AP selection in cell-free MIMO (C++ core)."""

from ._core import *  # noqa: F401,F403
from ._core import __version__  # noqa: F401
