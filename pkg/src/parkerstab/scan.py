"""Wavenumber sweeps and the combined stability verdict."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .criteria import CriteriaReport, evaluate_criteria
from .energy import ModeSpec
from .errors import EigenFailure
from .profiles import EquilibriumProfile
from .spectral import assemble_operators, growth_rate_fixed_point, solve_qep

__all__ = ["ScanSpec", "DispersionRow", "DispersionTable", "Verdict",
           "dispersion_scan", "stability_verdict", "default_mode_grid"]


@dataclass(frozen=True)
class ScanSpec:
    xi1_values: tuple
    xi2_values: tuple
    L1: float = 1.0
    L2: float = 1.0
    method: str = "fixed_point"     # "qep" | "fixed_point" | "both"
    tol: float = 1e-8

    def __post_init__(self):
        if not self.xi1_values or not self.xi2_values:
            raise ValueError("wavenumber grids must be nonempty")
        if self.L1 <= 0 or self.L2 <= 0:
            raise ValueError("periodicity lengths must be positive")
        if self.method not in ("qep", "fixed_point", "both"):
            raise ValueError(f"unknown method {self.method!r}")


def default_mode_grid(L1: float, L2: float, kmax: int = 16):
    """Harmonics k/L admitted by the periodic cell, k = 0..kmax."""
    return (tuple(k / L1 for k in range(kmax + 1)),
            tuple(k / L2 for k in range(kmax + 1)))


@dataclass(frozen=True)
class DispersionRow:
    xi1: float
    xi2: float
    re_lambda: float
    im_lambda: float
    method: str
    residual: float
    flagged: bool = False


@dataclass(frozen=True, eq=False)
class DispersionTable:
    rows: list
    max_growth: float
    argmax_mode: tuple
    bands: dict = field(default_factory=dict)   # xi2 -> (xi1_lo, xi1_hi) or None

    def unstable_band(self, xi2: float):
        return self.bands.get(xi2)


def _solve_mode(prof, mode, method, tol):
    ops = assemble_operators(prof, mode)
    rows = []
    if method in ("qep", "both"):
        try:
            top = solve_qep(ops, tol=tol, nev=1)[0]
            rows.append(DispersionRow(mode.xi1, mode.xi2, top.lam.real,
                                      top.lam.imag, "qep", top.residual))
        except EigenFailure:
            rows.append(DispersionRow(mode.xi1, mode.xi2, np.nan, np.nan,
                                      "qep", np.inf, flagged=True))
    if method in ("fixed_point", "both"):
        try:
            res = growth_rate_fixed_point(ops, tol=tol)
        except EigenFailure:
            rows.append(DispersionRow(mode.xi1, mode.xi2, np.nan, np.nan,
                                      "fixed_point", np.inf, flagged=True))
        else:
            if res is None:
                rows.append(DispersionRow(mode.xi1, mode.xi2, 0.0, 0.0,
                                          "fixed_point", 0.0))
            else:
                rows.append(DispersionRow(mode.xi1, mode.xi2, res.lam.real,
                                          res.lam.imag, "fixed_point", res.residual))
    return rows


def dispersion_scan(prof: EquilibriumProfile, spec: ScanSpec) -> DispersionTable:
    """One growth-rate solve per (xi1, xi2); never aborts on a bad mode."""
    rows = []
    for xi2 in sorted(spec.xi2_values):
        for xi1 in sorted(spec.xi1_values):
            rows.extend(_solve_mode(prof, ModeSpec(xi1=xi1, xi2=xi2),
                                    spec.method, spec.tol))

    growth = [(r.re_lambda, (r.xi1, r.xi2)) for r in rows
              if not r.flagged and (r.xi1, r.xi2) != (0.0, 0.0)]
    if growth:
        max_growth, argmax_mode = max(growth, key=lambda t: t[0])
    else:
        max_growth, argmax_mode = 0.0, (np.nan, np.nan)

    bands = {}
    for xi2 in sorted(spec.xi2_values):
        unstable = sorted(r.xi1 for r in rows
                          if r.xi2 == xi2 and not r.flagged and r.re_lambda > 0)
        bands[xi2] = (unstable[0], unstable[-1]) if unstable else None

    return DispersionTable(rows=rows, max_growth=float(max_growth),
                           argmax_mode=argmax_mode, bands=bands)


@dataclass(frozen=True, eq=False)
class Verdict:
    criteria: CriteriaReport
    domain: str
    theorem_2_4_case1: bool
    theorem_2_4_case2: bool
    theorem_2_5: bool
    max_growth: float
    consistent: bool
    diagnostics: str = ""
    table: DispersionTable | None = None

    def summary(self) -> dict:
        out = {
            "domain": self.domain,
            "theorem_2_4_case1": self.theorem_2_4_case1,
            "theorem_2_4_case2": self.theorem_2_4_case2,
            "theorem_2_5": self.theorem_2_5,
            "max_growth": self.max_growth,
            "consistent": self.consistent,
            "diagnostics": self.diagnostics,
        }
        out.update(self.criteria.summary())
        return out


def stability_verdict(prof: EquilibriumProfile, spec: ScanSpec,
                      domain: str = "slab3d") -> Verdict:
    """Evaluate theorem hypotheses and (for slabs) check them against a scan.

    The consistency flag is a soft check: the hypotheses are sufficient, not
    necessary, and discretization can miss marginal modes, so a mismatch is
    surfaced with diagnostics rather than raised.
    """
    if domain not in ("slab3d", "slab2d", "strip"):
        raise ValueError(f"unknown domain {domain!r}")
    report = evaluate_criteria(prof, L2=spec.L2)

    case1 = bool(report.schwarzschild_holds and report.xi3d > 0
                 and spec.L1 > 1.0 / report.xi3d)
    case2 = bool(report.tserkovnikov_holds)
    thm25 = bool(report.kappa > 1 and report.xi2d > 0
                 and spec.L1 > 1.0 / report.xi2d)

    if domain == "strip":
        diag = ("stable (sufficient bound)" if report.strip_stable_sufficient
                else "no stability certificate from the strip bound")
        return Verdict(criteria=report, domain=domain, theorem_2_4_case1=case1,
                       theorem_2_4_case2=case2, theorem_2_5=thm25,
                       max_growth=float("nan"), consistent=True,
                       diagnostics=diag)

    table = dispersion_scan(prof, spec)
    claim = case1 or case2 if domain == "slab3d" else thm25
    consistent = (not claim) or table.max_growth > 0
    diag = "" if consistent else (
        "theorem hypotheses predict instability but no growing mode was "
        "found at the scanned resolution"
    )
    return Verdict(criteria=report, domain=domain, theorem_2_4_case1=case1,
                   theorem_2_4_case2=case2, theorem_2_5=thm25,
                   max_growth=table.max_growth, consistent=bool(consistent),
                   diagnostics=diag, table=table)
