"""Allocate capital across AMM pools and staking."""

from ._core import *  # noqa: F401,F403
from ._core import ContractError, ParseError, ResourceLimitError, __version__  # noqa: F401
