import os
import json
from dataclasses import dataclass, field
from typing import List, Optional

from dotenv import load_dotenv

load_dotenv()

_ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))


def _bool(val: Optional[str], default: bool = False) -> bool:
    if val is None:
        return default
    return val.strip().lower() in {"1", "true", "yes", "on"}


def _list(val: Optional[str], default: Optional[List[str]] = None) -> List[str]:
    if val is None:
        return list(default or [])
    return [x.strip() for x in val.split(',') if x.strip()]


@dataclass(frozen=True)
class Settings:
    # Solver
    solver_seed: int = int(os.getenv("VROT_SEED", "20180501"))
    solver_restarts: int = int(os.getenv("VROT_RESTARTS", "200"))
    solver_tol: float = float(os.getenv("VROT_SOLVER_TOL", "1e-10"))
    solver_max_iter: int = int(os.getenv("VROT_SOLVER_MAX_ITER", "60"))
    jacobian_step: float = float(os.getenv("VROT_JACOBIAN_STEP", "1e-7"))
    continuation_step: float = float(os.getenv("VROT_CONTINUATION_STEP", "0.05"))
    branch_tol: float = float(os.getenv("VROT_BRANCH_TOL", "1e-6"))

    # Series / order checks
    series_residue_tol: float = float(os.getenv("VROT_RESIDUE_TOL", "1e-12"))
    order_rel_tol: float = float(os.getenv("VROT_ORDER_REL_TOL", "1e-8"))
    slope_tol: float = float(os.getenv("VROT_SLOPE_TOL", "0.2"))

    # Profiles and windows
    eps_limit: float = float(os.getenv("VROT_EPS_LIMIT", "1.0"))
    guard_points: int = int(os.getenv("VROT_GUARD_POINTS", "2001"))
    window_xtol: float = float(os.getenv("VROT_WINDOW_XTOL", "1e-8"))
    comparison_band: float = float(os.getenv("VROT_COMPARISON_BAND", "0.2"))
    profile_points: int = int(os.getenv("VROT_PROFILE_POINTS", "201"))

    # CLI
    verify_sections: List[str] = field(
        default_factory=lambda: _list(os.getenv("VROT_VERIFY_SECTIONS"), ["primes", "twins", "half_pi"])
    )
    log_level: str = os.getenv("VROT_LOG_LEVEL", "WARNING")
    show_progress: bool = _bool(os.getenv("VROT_PROGRESS"), default=False)

    # Data files
    reference_tables_path: str = os.path.join(_ROOT, "config", "reference_tables.json")
    ui_strings_path: str = os.path.join(_ROOT, "ui", "ui_strings.json")
    templates_dir: str = os.path.join(_ROOT, "templates")

    def load_reference_tables(self) -> dict:
        """Pinned phase tables used by verify-table and the window audit."""
        # imported here so config stays importable without src on the path
        from src.errors import ReferenceDataError

        try:
            with open(self.reference_tables_path, "r", encoding="utf-8") as f:
                data = json.load(f)
        except (OSError, json.JSONDecodeError) as e:
            raise ReferenceDataError(f"cannot read {self.reference_tables_path}: {e}") from e
        for key in ("primes", "twins", "half_pi", "window_claims"):
            if key not in data:
                raise ReferenceDataError(f"reference tables missing section '{key}'")
        return data

    def load_ui_strings(self) -> dict:
        try:
            with open(self.ui_strings_path, "r", encoding="utf-8") as f:
                return json.load(f)
        except Exception:
            # minimal defaults
            return {
                "invalid_parameters": "Invalid parameters: {error}",
                "malformed_document": "Malformed sequence document: {error}",
                "no_convergence": "Solver did not converge: {error}",
                "written": "Wrote {path}",
                "verify_pass": "All {count} rows reproduced",
                "verify_fail": "{failed} of {count} rows failed",
                "verify_empty": "Nothing selected; vacuous pass",
            }


settings = Settings()
