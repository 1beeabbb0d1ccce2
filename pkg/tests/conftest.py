"""Shared helpers: random model generation and an independent root finder."""

import numpy as np

from aaatrig.trigbary import Parity, TrigModel, TWO_PI, strip_distance


def random_model(rng, m, parity, force_pi=False, im_range=0.3):
    """Well-separated random model; avoids the even-parity near-pi guard."""
    pts = []
    while len(pts) < m:
        z = rng.uniform(0.0, TWO_PI) + 1j * rng.uniform(-im_range, im_range)
        if force_pi and not pts:
            z = np.pi + 0j
        elif parity is Parity.EVEN and abs(strip_distance(z, np.pi)) < 1e-3:
            continue
        if pts and np.min(strip_distance(z, np.asarray(pts))) < 0.35:
            continue
        pts.append(z)
    fvals = rng.standard_normal(m) + 1j * rng.standard_normal(m)
    weights = rng.standard_normal(m) + 1j * rng.standard_normal(m)
    return TrigModel.build(parity, np.asarray(pts), fvals, weights)


def barycentric_sum(model, z, use_numerator=False):
    """Direct kernel sum (numerator or denominator) and its term magnitudes."""
    from aaatrig.trigbary import _cst_values

    coeff = model.weights * (model.fvals if use_numerator else 1.0)
    z = np.atleast_1d(np.asarray(z, dtype=complex))
    u = (z[:, None] - model.support[None, :]) / 2.0
    terms = coeff[None, :] * _cst_values(model.parity, u)
    return np.sum(terms, axis=1), np.max(np.abs(terms), axis=1)


def dense_roots(model, use_numerator=False, y_max=4.0, nx=420, ny=170):
    """Roots of the model's denominator (or numerator) inside the strip,
    found independently of the eigenvalue route: sample |sum| on a dense
    grid, Newton-refine from every local minimum, keep verified roots."""
    from aaatrig.trigbary import cst_derivatives

    coeff = model.weights * (model.fvals if use_numerator else 1.0)

    def f_df(z):
        with np.errstate(invalid="ignore", divide="ignore", over="ignore"):
            u = (np.atleast_1d(z)[:, None] - model.support[None, :]) / 2.0
            kern = cst_derivatives(model.parity, u, 1)
            return (kern[0] @ coeff), (0.5 * kern[1] @ coeff)

    xs = np.linspace(0.0, TWO_PI, nx, endpoint=False)
    ys = np.linspace(-y_max, y_max, ny)
    Z = (xs[None, :] + 1j * ys[:, None]).ravel()
    vals, _ = f_df(Z)
    V = np.abs(vals).reshape(ny, nx)
    # Local minima; periodic in x, interior in y.
    minima = (
        (V <= np.roll(V, 1, axis=1))
        & (V <= np.roll(V, -1, axis=1))
        & (V <= np.roll(V, 1, axis=0))
        & (V <= np.roll(V, -1, axis=0))
    )
    minima[0, :] = minima[-1, :] = False
    seeds = list(Z.reshape(ny, nx)[minima])
    # Roots can hide inside one grid cell of a kernel singularity; ring
    # seeds around every support point catch those basins.
    angles = np.exp(2j * np.pi * np.arange(8) / 8)
    for s in model.support:
        for radius in (0.003, 0.012, 0.05):
            seeds.extend(s + radius * angles)
    roots = []
    for z0 in seeds:
        z = complex(z0)
        ok = False
        for _ in range(60):
            if not np.isfinite(z):
                break
            fv, dv = f_df(z)
            fv, dv = complex(fv[0]), complex(dv[0])
            if dv == 0.0:
                break
            step = fv / dv
            z = z - step
            if abs(step) < 1e-13 * (1.0 + abs(z)):
                ok = True
                break
        if not ok or not np.isfinite(z):
            continue
        fv, _ = f_df(z)
        _, ref = barycentric_sum(model, np.asarray([z]), use_numerator)
        if abs(fv[0]) > 1e-8 * ref[0]:
            continue
        if abs(z.imag) > y_max - 0.5:
            continue
        z = complex(np.mod(z.real, TWO_PI) + 1j * z.imag)
        if all(strip_distance(z, r) > 1e-6 for r in roots):
            roots.append(z)
    roots = np.asarray(roots, dtype=complex)
    order = np.lexsort((roots.imag, roots.real))
    return roots[order]


def match_point_sets(a, b, tol):
    """True when a and b agree as multisets to the given tolerance."""
    a, b = np.asarray(a), np.asarray(b)
    if len(a) != len(b):
        return False
    used = np.zeros(len(b), dtype=bool)
    for z in a:
        d = np.where(used, np.inf, strip_distance(z, b))
        j = int(np.argmin(d))
        if d[j] > tol:
            return False
        used[j] = True
    return True
