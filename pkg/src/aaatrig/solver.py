"""Greedy fitting of trigonometric barycentric rationals.

The loop alternates greedy support selection with a least-squares solve for
the weights: at step m the sample with the largest residual joins the
support, the trigonometric Loewner matrix is assembled over the remaining
samples, and the weights are the right singular vector of its smallest
singular value.  Optional far-field constraint rows pin the approximant's
values at +-i*infinity; an optional cleanup pass removes spurious
pole-zero pairs (Froissart doublets) after termination.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from . import polezero
from .numerics import min_singular_direction
from .trigbary import (
    FarField,
    Parity,
    SampleSet,
    TrigModel,
    _cst_values,
    strip_distance,
)


@dataclass(frozen=True)
class FitConfig:
    """Knobs for :func:`fit`.

    rel_tol and cleanup_tol are relative to the data scale max|f|.
    """

    parity: Parity = Parity.ODD
    rel_tol: float = 1e-13
    max_order: int = 100
    cleanup: bool = True
    cleanup_tol: float = 1e-13
    far_field: FarField | None = None

    def __post_init__(self):
        if self.rel_tol < 0.0:
            raise ValueError("rel_tol must be nonnegative")
        if self.max_order < 1:
            raise ValueError("max_order must be positive")
        if self.cleanup_tol < 0.0:
            raise ValueError("cleanup_tol must be nonnegative")


@dataclass(frozen=True)
class LeastSquaresSystem:
    """Weight least-squares system min ||matrix @ w||, ||w|| = 1.

    The unconstrained block factors as diag(s_F) @ cauchy - cauchy @ diag(s_f)
    with s_F the non-support data values and s_f the support values.
    """

    matrix: np.ndarray
    active_rows: np.ndarray
    s_F: np.ndarray
    s_f: np.ndarray
    cauchy: np.ndarray


def assemble_loewner(samples: SampleSet, support_idx, parity: Parity) -> LeastSquaresSystem:
    """Trigonometric Loewner matrix over the non-support samples.

    Entry (k, j) is (F_k - f_j) * cst((Z_k - z_j)/2) where Z_k runs over the
    samples not chosen as support.
    """
    support_idx = np.asarray(support_idx, dtype=int)
    m = len(support_idx)
    if len(np.unique(support_idx)) != m:
        raise ValueError("support indices must be distinct")
    M = samples.size
    if m > M / 2:
        raise ValueError("order exceeds half the sample count")
    active = np.ones(M, dtype=bool)
    active[support_idx] = False
    active_rows = np.flatnonzero(active)
    Z = samples.points[active_rows]
    F = samples.values[active_rows]
    zj = samples.points[support_idx]
    fj = samples.values[support_idx]
    C = _cst_values(parity, (Z[:, None] - zj[None, :]) / 2.0)
    A = (F[:, None] - fj[None, :]) * C
    return LeastSquaresSystem(A, active_rows, F, fj, C)


def append_far_field_rows(
    system: LeastSquaresSystem, target: FarField, parity: Parity, support
) -> LeastSquaresSystem:
    """Append the constraint rows that pin the far-field values.

    Odd parity appends two rows with entries (f_inf^+- - f_j) e^{-+i z_j/2};
    even parity appends the single row f_inf - f_j.
    """
    zj = np.asarray(support, dtype=complex)
    fj = system.s_f
    if parity is Parity.ODD:
        rows = np.vstack([
            (target.f_plus - fj) * np.exp(-1j * zj / 2.0),
            (target.f_minus - fj) * np.exp(1j * zj / 2.0),
        ])
    else:
        rows = (target.f_plus - fj)[None, :]
    return replace(system, matrix=np.vstack([system.matrix, rows]))


def fit(samples: SampleSet, config: FitConfig = FitConfig()) -> TrigModel:
    """Fit a trigonometric barycentric rational to scattered samples.

    Iterates greedy support selection and the Loewner least-squares solve
    until the max residual over the remaining samples drops below
    rel_tol * max|f|, or an order cap is hit (max_order or half the sample
    count).  Returns the model from the last iteration; ``converged`` is
    False when the caps ended the loop first.
    """
    M = samples.size
    if M < 4:
        raise ValueError("need at least 4 samples")
    pts, vals = samples.points, samples.values
    scale = float(np.max(np.abs(vals)))
    cap = min(config.max_order, M // 2)

    resid = np.abs(vals - np.mean(vals))
    active = np.ones(M, dtype=bool)
    support: list[int] = []
    err_history: list[float] = []
    converged = False
    weights = None

    for _ in range(cap):
        pick = int(np.argmax(np.where(active, resid, -1.0)))
        support.append(pick)
        active[pick] = False
        system = assemble_loewner(samples, support, config.parity)
        if config.far_field is not None:
            system = append_far_field_rows(
                system, config.far_field, config.parity, pts[support]
            )
        weights = min_singular_direction(system.matrix)
        fj = vals[support]
        with np.errstate(divide="ignore", invalid="ignore"):
            r_active = (system.cauchy @ (weights * fj)) / (system.cauchy @ weights)
        res_active = np.abs(vals[system.active_rows] - r_active)
        resid[system.active_rows] = np.where(
            np.isfinite(res_active), res_active, np.inf
        )
        err = float(np.max(resid[system.active_rows]))
        err_history.append(err)
        if err <= config.rel_tol * scale:
            converged = True
            break

    model = TrigModel(
        config.parity,
        pts[support],
        vals[support],
        weights,
        np.asarray(err_history),
        scale,
        converged=converged,
    )
    if config.cleanup:
        model = cleanup(model, samples, config)
    return model


def cleanup(model: TrigModel, samples: SampleSet, config: FitConfig) -> TrigModel:
    """Remove support points backing small-residue (Froissart) poles.

    Poles whose classical residue falls below cleanup_tol * scale mark their
    nearest support point for removal; a single final least-squares solve on
    the reduced support produces the returned model.  A model with no small
    residues is returned unchanged.
    """
    if model.m < 2:
        return model
    poles = polezero.poles_and_zeros(model).poles
    if len(poles) == 0:
        return model
    res = polezero._residues_unchecked(model, poles)
    mags = np.where(np.isfinite(res.real) & np.isfinite(res.imag), np.abs(res), np.inf)
    small = mags < config.cleanup_tol * model.scale
    if not np.any(small):
        return model

    # One support point per spurious pole, assigned by greedy minimum-distance
    # matching so that coincident doublets do not collapse onto one removal.
    spurious = poles[small]
    dists = strip_distance(spurious[:, None], model.support[None, :])
    order = sorted(
        (dists[k, j], k, j)
        for k in range(len(spurious))
        for j in range(model.m)
    )
    drop: set[int] = set()
    assigned: set[int] = set()
    for _, k, j in order:
        if k in assigned or j in drop:
            continue
        assigned.add(k)
        drop.add(j)
    keep = [j for j in range(model.m) if j not in drop]
    if not keep:
        return replace(model, cleanup_warning=True)

    support_idx = _support_sample_indices(model, samples)[keep]
    system = assemble_loewner(samples, support_idx, model.parity)
    if config.far_field is not None:
        system = append_far_field_rows(
            system, config.far_field, model.parity, samples.points[support_idx]
        )
    weights = min_singular_direction(system.matrix)
    fj = samples.values[support_idx]
    with np.errstate(divide="ignore", invalid="ignore"):
        r_active = (system.cauchy @ (weights * fj)) / (system.cauchy @ weights)
    err = float(np.max(np.abs(samples.values[system.active_rows] - r_active)))
    history = np.append(model.err_history[: len(keep) - 1], err)
    return TrigModel(
        model.parity,
        samples.points[support_idx],
        fj,
        weights,
        history,
        model.scale,
        converged=model.converged,
    )


def _support_sample_indices(model: TrigModel, samples: SampleSet) -> np.ndarray:
    """Locate each support point in the sample set (tolerance 1e-9)."""
    idx = np.empty(model.m, dtype=int)
    for j, z in enumerate(model.support):
        d = strip_distance(z, samples.points)
        k = int(np.argmin(d))
        if d[k] > 1e-9:
            raise ValueError("support point not present in the sample set")
        idx[j] = k
    return idx
