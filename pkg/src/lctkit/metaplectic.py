"""Unitary side of the correspondence on the truncated number basis.

U = exp(i (t+ b+ + t- b- + tx bx)) is built from the Hermitian generator in
the quarter normalisation b = J/(4B), which makes the construction independent
of the dispersion scale B; the same angles then exponentiate on the classical
side to a 2x2 matrix ((Pi, Xi), (Theta, Lambda)), and conjugation by U must
reproduce that matrix action on the reduced quadratures

    p_hat = (Zminus + Zplus)/sqrt(2),   x_hat = i (Zminus - Zplus)/sqrt(2).

Truncation contaminates the top of the tower, so all residuals are measured
on the leading cutoff/4 block, which stays clean for |angles| <= 1.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .fock import CutoffTooSmall, TruncatedOperator, dispersion_matrices, ladder_matrices
from .symplectic import DimensionMismatch, ThetaAngles, exp_sl2, from_angles
from .weyl import EUCLIDEAN_1D, WeylAlgebra, transform_generators

UNITARITY_TOL = 1e-12
RATIONALIZE_DENOMINATOR = 10 ** 6


class NonPositiveDispersion(ValueError):
    """Dispersion scales must be positive."""


@dataclass(frozen=True)
class UnitaryLCT:
    """Truncated unitary representative of a linear canonical transformation."""

    angles: ThetaAngles
    B: float
    cutoff: int
    U: TruncatedOperator

    def __post_init__(self):
        u = self.U.matrix
        defect = np.max(np.abs(u.conj().T @ u - np.eye(self.cutoff)))
        if defect > UNITARITY_TOL:
            raise ValueError(f"operator is not unitary: defect {defect:.3e}")


def generator_matrices(B: float, cutoff: int):
    """Quarter-normalised generator triple (b+, b-, bx) as matrices."""
    jp, jm, jx = dispersion_matrices(B, cutoff)
    scale = 1.0 / (4.0 * B)
    return jp.matrix * scale, jm.matrix * scale, jx.matrix * scale


def reduced_quadratures(cutoff: int):
    """Matrices of the reduced momentum and coordinate, p_hat and x_hat."""
    zm, zp = ladder_matrices(cutoff)
    p_hat = (zm.matrix + zp.matrix) / np.sqrt(2.0)
    x_hat = 1j * (zm.matrix - zp.matrix) / np.sqrt(2.0)
    return p_hat, x_hat


def build_unitary(angles: ThetaAngles, B: float, cutoff: int) -> UnitaryLCT:
    """Exponentiate the Hermitian angle combination through eigendecomposition."""
    if angles.dim != 1:
        raise DimensionMismatch("the truncated representation is one-dimensional")
    if not B > 0:
        raise NonPositiveDispersion("dispersion scale B must be positive")
    if cutoff < 16:
        raise CutoffTooSmall("unitary construction needs cutoff >= 16")
    tp, tm, tx = angles.triple()
    bp, bm, bx = generator_matrices(B, cutoff)
    generator = tp * bp + tm * bm + tx * bx
    evals, vecs = np.linalg.eigh(generator)
    u = (vecs * np.exp(1j * evals)) @ vecs.conj().T
    return UnitaryLCT(angles, B, cutoff, TruncatedOperator(cutoff, u, "unitary_lct"))


def conjugate(u: UnitaryLCT, op: TruncatedOperator) -> TruncatedOperator:
    """U A U^dagger at matching cutoff."""
    if op.cutoff != u.cutoff:
        raise DimensionMismatch(
            f"operator cutoff {op.cutoff} does not match unitary cutoff {u.cutoff}"
        )
    m = u.U.matrix @ op.matrix @ u.U.matrix.conj().T
    return TruncatedOperator(u.cutoff, m, f"conj({op.label})")


def _block(m: np.ndarray, size: int) -> np.ndarray:
    return m[:size, :size]


def verify_homomorphism(angles: ThetaAngles, B: float, cutoff: int, tol: float) -> dict:
    """Compare U p U+, U x U+ against the classical matrix action.

    Both sides are computed independently: the quantum side by dense
    conjugation, the classical side from the closed-form 2x2 exponential.
    Residuals are taken on the leading cutoff/4 block.
    """
    if cutoff < 32:
        raise CutoffTooSmall("homomorphism check needs cutoff >= 32")
    u = build_unitary(angles, B, cutoff)
    p_hat, x_hat = reduced_quadratures(cutoff)
    s = exp_sl2(from_angles(angles, EUCLIDEAN_1D))
    pi, xi = float(s.Pi[0, 0]), float(s.Xi[0, 0])
    th, la = float(s.Theta[0, 0]), float(s.Lambda[0, 0])
    block = cutoff // 4
    lhs_p = u.U.matrix @ p_hat @ u.U.matrix.conj().T
    lhs_x = u.U.matrix @ x_hat @ u.U.matrix.conj().T
    res_p = float(np.max(np.abs(_block(lhs_p - (pi * p_hat + th * x_hat), block))))
    res_x = float(np.max(np.abs(_block(lhs_x - (xi * p_hat + la * x_hat), block))))
    max_res = max(res_p, res_x)
    return {
        "angles": angles.triple(),
        "B": B,
        "cutoff": cutoff,
        "block": block,
        "matrix": {"Pi": pi, "Xi": xi, "Theta": th, "Lambda": la},
        "residual_p": res_p,
        "residual_x": res_x,
        "max_residual": max_res,
        "tol": tol,
        "passed": max_res < tol,
    }


def rationalize_symplectic(s) -> list:
    """Nearest small-denominator rational matrix that is exactly in SL(2, Q).

    Three entries are rounded to denominator <= 1e6 and the fourth is solved
    exactly from the determinant condition, dividing by the largest available
    partner entry so the completion stays well conditioned.
    """
    pi, xi = float(s.Pi[0, 0]), float(s.Xi[0, 0])
    th, la = float(s.Theta[0, 0]), float(s.Lambda[0, 0])

    def rat(v: float) -> Fraction:
        return Fraction(v).limit_denominator(RATIONALIZE_DENOMINATOR)

    if max(abs(pi), abs(la)) >= max(abs(th), abs(xi)):
        rth, rxi = rat(th), rat(xi)
        if abs(pi) >= abs(la):
            rpi = rat(pi)
            rla = (1 + rth * rxi) / rpi
        else:
            rla = rat(la)
            rpi = (1 + rth * rxi) / rla
    else:
        rpi, rla = rat(pi), rat(la)
        if abs(th) >= abs(xi):
            rth = rat(th)
            rxi = (rpi * rla - 1) / rth
        else:
            rxi = rat(xi)
            rth = (rpi * rla - 1) / rxi
    return [[rpi, rxi], [rth, rla]]


def verify_basis_transformation(angles: ThetaAngles, B: float, cutoff: int, tol: float) -> dict:
    """Check the generator transformation law against numerical conjugation.

    The engine-derived coefficient rows come from the exact symbolic
    substitution at a rational approximant of the group matrix; the published
    rows are evaluated alongside so their verdicts are recorded.  Residuals
    are measured on the leading cutoff/4 block.
    """
    if cutoff < 32:
        raise CutoffTooSmall("basis-law check needs cutoff >= 32")
    u = build_unitary(angles, B, cutoff)
    s = exp_sl2(from_angles(angles, EUCLIDEAN_1D))
    s_rat = rationalize_symplectic(s)
    alg = WeylAlgebra(EUCLIDEAN_1D, +1)
    bp, bm, bx = generator_matrices(B, cutoff)
    mats = {"+": bp, "-": bm, "x": bx}
    block = cutoff // 4
    pi, xi = float(s.Pi[0, 0]), float(s.Xi[0, 0])
    th, la = float(s.Theta[0, 0]), float(s.Lambda[0, 0])
    printed_rows = {
        "+": (0.5 * (pi * pi + th * th), 0.5 * (xi * xi - la * la), pi * th + xi * la),
        "-": (0.5 * (pi * pi + th * th), -0.5 * (xi * xi - la * la), pi * th - xi * la),
        "x": (pi * xi + th * la, pi * xi - th * la, pi * la + th * xi),
    }
    report = {
        "angles": angles.triple(),
        "B": B,
        "cutoff": cutoff,
        "block": block,
        "tol": tol,
        "rows": {},
    }
    worst = 0.0
    for kind in ("+", "-", "x"):
        numeric = u.U.matrix @ mats[kind] @ u.U.matrix.conj().T
        engine = transform_generators(alg, s_rat, kind).triple()
        coeffs = tuple(float(c) for c in engine)
        recon = coeffs[0] * bp + coeffs[1] * bm + coeffs[2] * bx
        res_engine = float(np.max(np.abs(_block(numeric - recon, block))))
        pr = printed_rows[kind]
        recon_printed = pr[0] * bp + pr[1] * bm + pr[2] * bx
        res_printed = float(np.max(np.abs(_block(numeric - recon_printed, block))))
        worst = max(worst, res_engine)
        report["rows"][kind] = {
            "engine_coefficients": coeffs,
            "printed_coefficients": pr,
            "engine_residual": res_engine,
            "printed_residual": res_printed,
            "printed_row_holds": res_printed < tol,
        }
    report["max_residual"] = worst
    report["passed"] = worst < tol
    return report


def position_convention_unitary(u: UnitaryLCT) -> np.ndarray:
    """Matrix of U in the phase convention of the real Hermite-Gaussian family.

    The number basis used here fixes its phases by the ladder action
    sqrt(n) |n-1> without any phase factor; relative to the wavefunction
    family (real up to the plane-wave factor) that convention carries an
    extra i^n per level.  Re-expressing U for coefficient vectors obtained by
    projecting onto the wavefunctions is the diagonal conjugation D U D+ with
    D = diag(i^n).  Without it a coordinate squeeze would act as its inverse
    on sampled data.
    """
    phases = 1j ** np.arange(u.cutoff)
    return (phases[:, None] * u.U.matrix) * phases.conj()[None, :]


def rescale_frame(coefficients, B: float, Bprime: float, normalization: str = "J"):
    """Carry generator coefficients from dispersion scale B to Bprime.

    Scale-normalised coefficients (the J family, linear in B) pick up the
    factor Bprime/B; quarter-normalised coefficients (the b family) are scale
    free and pass through unchanged.
    """
    if not (B > 0 and Bprime > 0):
        raise NonPositiveDispersion("dispersion scales must be positive")
    if normalization == "b":
        return tuple(coefficients)
    if normalization == "J":
        factor = Bprime / B
        return tuple(c * factor for c in coefficients)
    raise ValueError("normalization must be 'J' or 'b'")
