"""Base class for all verification checks."""

import logging
from abc import ABC, abstractmethod
from typing import Any, Dict, List, Optional

from .models import CheckContext, CheckFailure

logger = logging.getLogger(__name__)


class BaseCheck(ABC):
    """Abstract base class for verification checks."""

    check_id: int = 0
    check_name: str = "base"
    check_description: str = ""

    def __init__(self, config: Optional[Dict[str, Any]] = None):
        """Initialize check with optional configuration.

        Args:
            config: Check-specific configuration dictionary
        """
        self.config = config or {}
        self.enabled = self.config.get('enabled', True)
        self.info: Dict[str, Any] = {}

    @abstractmethod
    def run(self, context: CheckContext) -> List[CheckFailure]:
        """Verify the property.

        Args:
            context: Shared settings and enumeration cache

        Returns:
            Failures found; empty when the property holds
        """

    def create_failure(
        self,
        description: str,
        n: Optional[int] = None,
        codes: Optional[List[str]] = None,
        details: Optional[Dict[str, Any]] = None
    ) -> CheckFailure:
        """Helper to create a failure for this check."""
        return CheckFailure(
            check_id=self.check_id,
            check_name=self.check_name,
            description=description,
            n=n,
            codes=codes or [],
            details=details or {}
        )

    def sizes(self, key: str = 'max_n', default: int = 3, start: int = 1) -> range:
        return range(start, self.config.get(key, default) + 1)

    def __repr__(self) -> str:
        return f"<{self.__class__.__name__}(id={self.check_id}, enabled={self.enabled})>"
