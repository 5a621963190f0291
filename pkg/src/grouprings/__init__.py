"""Exact computations in rational and integral group rings of finite groups.

Wedderburn components via strong Shoda pairs and their generalizations,
complete sets of primitive idempotents, matrix units and unit generators.
"""

from .errors import EXIT_CODES, GroupRingError
from .groups import FiniteGroup, parse_group_text

__all__ = ["EXIT_CODES", "FiniteGroup", "GroupRingError", "parse_group_text"]
__version__ = "0.1.0"
