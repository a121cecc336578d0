"""Data models for verification results."""

from dataclasses import dataclass, field
from datetime import datetime
from typing import Any, Callable, Dict, List, Optional

from ..enumeration import DEFAULT_CEILING


@dataclass
class CheckFailure:
    """One violated property, with what is needed to reproduce it."""
    check_id: int
    check_name: str
    description: str
    n: Optional[int] = None
    codes: List[str] = field(default_factory=list)
    details: Dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> Dict[str, Any]:
        return {
            'check_id': self.check_id,
            'check_name': self.check_name,
            'description': self.description,
            'n': self.n,
            'codes': list(self.codes),
            'details': self.details,
        }


@dataclass
class CheckContext:
    """Settings shared by every check, plus a cache of expensive enumerations."""
    seed: int = 0
    samples: int = 10000
    ceiling: int = DEFAULT_CEILING
    threads: int = 1
    _cache: Dict[Any, Any] = field(default_factory=dict, repr=False)

    def cached(self, key: Any, build: Callable[[], Any]) -> Any:
        if key not in self._cache:
            self._cache[key] = build()
        return self._cache[key]


@dataclass
class CheckResult:
    """Outcome of running one check."""
    check_id: int
    check_name: str
    passed: bool
    failures: List[CheckFailure] = field(default_factory=list)
    elapsed: float = 0.0
    info: Dict[str, Any] = field(default_factory=dict)
    error: Optional[str] = None
    checked_at: str = field(default_factory=lambda: datetime.now().isoformat())

    def to_dict(self, timings: bool = True) -> Dict[str, Any]:
        out = {
            'check_id': self.check_id,
            'check_name': self.check_name,
            'passed': self.passed,
            'failures': [f.to_dict() for f in self.failures],
            'info': self.info,
            'error': self.error,
        }
        if timings:
            out['elapsed_seconds'] = round(self.elapsed, 3)
        return out


@dataclass
class VerificationReport:
    """All check results of one verification run."""
    results: List[CheckResult] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(r.passed for r in self.results)

    def failures(self) -> List[CheckFailure]:
        return [f for r in self.results for f in r.failures]

    def to_dict(self) -> Dict[str, Any]:
        return {'ok': self.ok, 'results': [r.to_dict() for r in self.results]}
