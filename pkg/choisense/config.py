import os
from dataclasses import dataclass, replace
from typing import Mapping, Optional, Union

FloatTol = Union[str, float]


@dataclass(frozen=True)
class CertifySettings:
    EXACT_DIM_LIMIT: int = 225          # exact mode up to d_in·d_out = 225 (15×15)
    POSITIVITY_TOL: float = 1e-10       # Choi eigenvalue floor, relative to the largest
    FLOAT_RANK_TOL: FloatTol = "auto"   # max(r, c)·eps·σ_max
    FLOAT_WITNESS_LIMIT: int = 2500     # largest float system (rows) we solve a witness for
    MAX_WORKERS: int = 4                # report-all threads
    OUTPUT_DIR: str = "./.choisense_out"


# Global Singleton for easier access by the CLI and certify()
DEFAULT_SETTINGS = CertifySettings()

_ENV_FIELDS = {
    "CHOISENSE_EXACT_DIM_LIMIT": ("EXACT_DIM_LIMIT", int),
    "CHOISENSE_POSITIVITY_TOL": ("POSITIVITY_TOL", float),
    "CHOISENSE_FLOAT_TOL": ("FLOAT_RANK_TOL", None),
    "CHOISENSE_FLOAT_WITNESS_LIMIT": ("FLOAT_WITNESS_LIMIT", int),
    "CHOISENSE_MAX_WORKERS": ("MAX_WORKERS", int),
    "CHOISENSE_OUTPUT_DIR": ("OUTPUT_DIR", str),
}


def parse_tolerance(raw: Union[str, float]) -> FloatTol:
    """Accept ``"auto"`` or a nonnegative float."""
    if isinstance(raw, str) and raw.strip().lower() == "auto":
        return "auto"
    value = float(raw)
    if value < 0:
        raise ValueError(f"tolerance must be nonnegative or 'auto', got {raw}")
    return value


def load_settings(env: Optional[Mapping[str, str]] = None, base: CertifySettings = DEFAULT_SETTINGS) -> CertifySettings:
    """
    Overlay CHOISENSE_* environment variables on ``base``.

    :param env: Mapping to read (defaults to ``os.environ``).
    :raises ValueError: If a variable cannot be parsed.
    """
    env = os.environ if env is None else env
    overrides = {}
    for var, (name, cast) in _ENV_FIELDS.items():
        raw = env.get(var)
        if raw is None or raw == "":
            continue
        try:
            overrides[name] = parse_tolerance(raw) if cast is None else cast(raw)
        except ValueError as e:
            raise ValueError(f"invalid value for {var}: {raw!r} ({e})") from e
    return replace(base, **overrides)


def resolve_mode(d_in: int, d_out: int, requested: Optional[str] = None, settings: CertifySettings = DEFAULT_SETTINGS) -> str:
    """Requested mode wins; otherwise exact iff d_in·d_out ≤ EXACT_DIM_LIMIT."""
    if requested is not None:
        if requested not in ("exact", "float"):
            raise ValueError(f"mode must be 'exact' or 'float', got {requested!r}")
        return requested
    return "exact" if d_in * d_out <= settings.EXACT_DIM_LIMIT else "float"
