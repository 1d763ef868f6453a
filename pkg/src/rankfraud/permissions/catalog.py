"""Permission catalog: every known permission id, with the dangerous subset marked."""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import structlog

from rankfraud.config.defaults import DANGEROUS_PERMISSION_TARGET, DEFAULT_PERMISSION_CATALOG
from rankfraud.core.errors import ValidationError

logger = structlog.get_logger()

DANGEROUS_MARKER = "dangerous"


@dataclass(frozen=True)
class PermissionCatalog:
    permissions: frozenset[str]
    dangerous: frozenset[str]

    def __post_init__(self) -> None:
        stray = self.dangerous - self.permissions
        if stray:
            raise ValidationError(f"Dangerous permissions missing from catalog: {', '.join(sorted(stray))}")

    def __contains__(self, permission: object) -> bool:
        return permission in self.permissions

    def is_dangerous(self, permission: str) -> bool:
        return permission in self.dangerous

    def dangerous_in(self, permissions: list[str] | frozenset[str] | set[str]) -> frozenset[str]:
        return frozenset(p for p in permissions if p in self.dangerous)

    def unknown_in(self, permissions: list[str] | frozenset[str] | set[str]) -> frozenset[str]:
        return frozenset(p for p in permissions if p not in self.permissions)


def parse_catalog(text: str, source: str = "<catalog>") -> PermissionCatalog:
    """Parse catalog text: one id per line, an optional trailing marker token, '#' comments."""
    permissions: set[str] = set()
    dangerous: set[str] = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) > 2 or (len(parts) == 2 and parts[1].lower() != DANGEROUS_MARKER):
            raise ValidationError(f"{source}:{lineno}: expected '<permission> [{DANGEROUS_MARKER}]', got '{line}'")
        permissions.add(parts[0])
        if len(parts) == 2:
            dangerous.add(parts[0])
    return PermissionCatalog(permissions=frozenset(permissions), dangerous=frozenset(dangerous))


def load_catalog(path: str | Path | None = None, *, strict: bool = False) -> PermissionCatalog:
    """Load a catalog file, checking the dangerous count against the reference API level.

    A count other than the reference one is logged, or raised when ``strict``.
    """
    source = Path(path) if path else DEFAULT_PERMISSION_CATALOG
    if not source.is_file():
        raise ValidationError(f"Permission catalog not found: {source}")
    catalog = parse_catalog(source.read_text(encoding="utf-8"), str(source))
    if len(catalog.dangerous) != DANGEROUS_PERMISSION_TARGET:
        if strict:
            raise ValidationError(
                f"Catalog {source} marks {len(catalog.dangerous)} dangerous permissions, "
                f"expected {DANGEROUS_PERMISSION_TARGET}"
            )
        logger.warning(
            "permissions.dangerous_count_mismatch",
            loaded=len(catalog.dangerous),
            expected=DANGEROUS_PERMISSION_TARGET,
        )
    logger.debug("permissions.catalog_loaded", total=len(catalog.permissions), dangerous=len(catalog.dangerous))
    return catalog
