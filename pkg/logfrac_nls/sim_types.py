"""Type definitions for simulations and experiments."""
from dataclasses import asdict, dataclass, field, replace
from enum import Enum
from pathlib import Path
from typing import Any, Dict, List, Optional

from .fractional_ops import FractionalOrder
from .grid import Grid, make_grid
from .log_nonlinearity import CouplingConstant, RegularizationLevel


SCHEMES = ("lie", "strang")
STEP_ROUNDING_GUARD = 1e-9


@dataclass(frozen=True)
class SimParams:
    """Parameters of one evolution of the regularized equation."""
    s: float = 0.5
    lam: float = -1.0
    eps: float = 0.1
    dt: float = 1e-3
    T: float = 1.0
    scheme: str = "strang"  # "strang" or "lie"
    sample_every: int = 10

    def __post_init__(self):
        FractionalOrder(self.s)
        CouplingConstant(self.lam)
        RegularizationLevel(self.eps)
        if not self.dt > 0:
            raise ValueError(f"Time step must be positive, got dt={self.dt}")
        if not self.T > 0:
            raise ValueError(f"Horizon must be positive, got T={self.T}")
        if self.dt > self.T * (1 + 1e-12):
            raise ValueError(f"Time step dt={self.dt} exceeds horizon T={self.T}")
        ratio = self.T / self.dt
        if abs(ratio - round(ratio)) >= STEP_ROUNDING_GUARD:
            raise ValueError(f"T/dt = {ratio} is not an integer step count")
        if self.scheme not in SCHEMES:
            raise ValueError(f"Unknown scheme '{self.scheme}', expected one of {SCHEMES}")
        if int(self.sample_every) < 1:
            raise ValueError(f"sample_every must be >= 1, got {self.sample_every}")

    @property
    def steps(self) -> int:
        return int(round(self.T / self.dt))

    def with_(self, **changes) -> "SimParams":
        return replace(self, **changes)


@dataclass(frozen=True)
class GridSpec:
    d: int = 1
    n: int = 256
    L: float = 32.0

    def build(self) -> Grid:
        return make_grid(self.d, self.n, self.L)


@dataclass(frozen=True)
class DatumSpec:
    """Named initial-datum family plus its parameters."""
    family: str = "gaussian"
    params: Dict[str, Any] = field(default_factory=dict)


@dataclass
class ExperimentConfig:
    """Configuration for one experiment."""
    name: str
    grid: GridSpec = field(default_factory=GridSpec)
    params: SimParams = field(default_factory=SimParams)
    initial_datum: DatumSpec = field(default_factory=DatumSpec)
    sweeps: Dict[str, List[float]] = field(default_factory=dict)
    output_dir: Path = Path("output")
    seed: int = 20240607
    slack: Dict[str, float] = field(default_factory=lambda: {"bound": 0.05, "moment": 0.10, "refinement": 0.20})

    def sweep(self, key: str, default: List[float]) -> List[float]:
        return list(self.sweeps.get(key, default))

    @property
    def experiment_dir(self) -> Path:
        return Path(self.output_dir) / self.name

    def to_dict(self) -> Dict[str, Any]:
        return {
            "name": self.name,
            "grid": asdict(self.grid),
            "params": asdict(self.params),
            "initial_datum": {"family": self.initial_datum.family, **self.initial_datum.params},
            "sweeps": {k: list(v) for k, v in self.sweeps.items()},
            "output_dir": str(self.output_dir),
            "seed": self.seed,
            "slack": dict(self.slack),
        }


# Estimates an assertion can exercise. Every assertion names exactly one key and
# report.json carries the statements of the keys it uses.
ESTIMATES: Dict[str, str] = {
    "mass_conservation": "||u(t)||_L2 = ||phi||_L2 along the regularized flow",
    "energy_conservation": "E_eps(u(t)) = E_eps(phi) along the regularized flow",
    "energy_limit": "E_eps(phi) -> E(phi) as eps -> 0 by dominated convergence",
    "energy_split": "|z|^2 log((|z|+eps)^2) = F1_eps(z) + F2_eps(z) with the theta cutoff",
    "sobolev_growth": "||u(t)||_{H^s}^2, ||grad u(t)||^2 <= C e^{4|lam|t} and ||u_t(t)|| <= C e^{2|lam|t}",
    "eps_cauchy": "localized differences of the eps and mu flows vanish as eps, mu -> 0",
    "commutator_continuity": "[(-Delta)^s, <x>^alpha] is bounded H^s -> L2 for 0 < alpha < 2s, alpha <= 1",
    "weighted_moment": "||<x>^alpha u(t)|| <= ||<x>^alpha phi|| + K sup ||u||_{H^s} t",
    "standing_wave": "e^{-i omega t} e^{-|lam| |x|^2 / 2} solves the s = 1 equation with omega = -lam d",
    "multiplier_symbol": "(-Delta)^s is the Fourier multiplier |k|^{2s}",
    "norm_equivalence": "the Gagliardo double integral equals c(d,s) ||(-Delta)^{s/2} u||^2",
    "singular_integral": "(-Delta)^s u is a principal-value integral of second differences",
    "log_lipschitz": "|Im (g_eps(u) - g_mu(v)) conj(u-v)| / 2 <= |u-v|^2 + |eps-mu| |u-v|",
    "mu_eps": "mu_eps(sigma) = int_0^sigma 2 tau^2 / (tau + eps) dtau lies in [0, sigma^2]",
    "log_growth": "|u log|u|^2| <= C(delta) (|u|^{1-delta} + |u|^{1+delta})",
    "holder_log": "|v log(|v|+eps) - u log|u|| <= C(a) (eps + |u-v| + (1 + |u|^{1-a} log+|u| + |v|^{1-a} log+|v|) |u-v|^a)",
    "l2_stability": "||u(t) - v(t)||^2 <= e^{4|lam|t} ||phi - psi||^2",
    "spectral_resolution": "spectral energy in the top octave stays below the resolution tolerance",
}


class Verdict(str, Enum):
    PASS = "pass"
    FAIL = "fail"
    DIAGNOSTIC = "diagnostic"


@dataclass
class Assertion:
    """One checked (or merely recorded) estimate."""
    name: str
    verdict: Verdict
    ref: str  # key into ESTIMATES
    estimate: str  # how this check exercises it
    measured: Dict[str, Any] = field(default_factory=dict)
    message: str = ""

    def to_dict(self) -> Dict[str, Any]:
        return {
            "name": self.name,
            "verdict": self.verdict.value,
            "ref": self.ref,
            "estimate": self.estimate,
            "measured": self.measured,
            "message": self.message,
        }


@dataclass
class ExperimentReport:
    """Result of one experiment."""
    name: str
    config: Dict[str, Any]
    assertions: List[Assertion] = field(default_factory=list)
    measured: Dict[str, Any] = field(default_factory=dict)
    artifacts: List[str] = field(default_factory=list)
    error: Optional[str] = None

    def check(self, name: str, ok: bool, estimate: str, message: str = "", *, ref: str, **measured) -> Assertion:
        verdict = Verdict.PASS if ok else Verdict.FAIL
        return self._add(Assertion(name, verdict, ref, estimate, measured, message))

    def diagnostic(self, name: str, estimate: str, message: str = "", *, ref: str, **measured) -> Assertion:
        return self._add(Assertion(name, Verdict.DIAGNOSTIC, ref, estimate, measured, message))

    def _add(self, assertion: Assertion) -> Assertion:
        if assertion.ref not in ESTIMATES:
            raise KeyError(f"Assertion {assertion.name} names unknown estimate {assertion.ref!r}")
        self.assertions.append(assertion)
        tag = {Verdict.PASS: "[OK]", Verdict.FAIL: "[FAIL]", Verdict.DIAGNOSTIC: "[INFO]"}[assertion.verdict]
        detail = f" - {assertion.message}" if assertion.message else ""
        print(f"{tag} {self.name}: {assertion.name} ({assertion.verdict.value}){detail}")
        return assertion

    @property
    def failures(self) -> List[Assertion]:
        return [a for a in self.assertions if a.verdict == Verdict.FAIL]

    @property
    def passed(self) -> bool:
        return self.error is None and not self.failures

    def to_dict(self) -> Dict[str, Any]:
        return {
            "name": self.name,
            "passed": self.passed,
            "config": self.config,
            "assertions": [a.to_dict() for a in self.assertions],
            "references": {ref: ESTIMATES[ref] for ref in sorted({a.ref for a in self.assertions})},
            "measured": self.measured,
            "artifacts": list(self.artifacts),
            "error": self.error,
        }
