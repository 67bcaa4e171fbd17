"""Adaptive Gauss-Kronrod quadrature vectorized over batches of integrands.

Built for smooth integrands that decay like e^(-y) on intervals
[a_i, a_i + span]: a fixed panel layout concentrates nodes where the
integrand lives, a 7-15 Gauss-Kronrod pair supplies the error estimate,
and rows failing their tolerance are re-evaluated on bisected panels.

The integrand callback receives the row indices alongside the node matrix
so each row can carry its own parameters; every row is evaluated with an
identical node layout relative to its lower limit, which keeps results
bit-identical whether rows are integrated singly or in batches.
"""

from __future__ import annotations

import numpy as np

from .errors import QuadratureError

# 15-point Kronrod extension of 7-point Gauss-Legendre on [-1, 1].
_XK = np.array([
    -0.991455371120813, -0.949107912342759, -0.864864423359769,
    -0.741531185599394, -0.586087235467691, -0.405845151377397,
    -0.207784955007898, 0.0,
    0.207784955007898, 0.405845151377397, 0.586087235467691,
    0.741531185599394, 0.864864423359769, 0.949107912342759,
    0.991455371120813,
])
_WK = np.array([
    0.022935322010529, 0.063092092629979, 0.104790010322250,
    0.140653259715525, 0.169004726639267, 0.190350578064785,
    0.204432940075298, 0.209482141084728,
    0.204432940075298, 0.190350578064785, 0.169004726639267,
    0.140653259715525, 0.104790010322250, 0.063092092629979,
    0.022935322010529,
])
# Embedded Gauss rule lives on the odd Kronrod nodes.
_GAUSS_IDX = np.arange(1, 15, 2)
_WG = np.array([
    0.129484966168870, 0.279705391489277, 0.381830050505119,
    0.417959183673469, 0.381830050505119, 0.279705391489277,
    0.129484966168870,
])

# Panel edges relative to the lower limit, for span 60: dense near the
# lower edge where e^(-y) y^2 peaks, coarse in the tail.
_PANEL_EDGES = np.array([0.0, 0.5, 1.0, 2.0, 4.0, 8.0, 16.0, 32.0, 60.0])

NODES_PER_PANEL = len(_XK)


def _panel_nodes(edges: np.ndarray) -> np.ndarray:
    """Map [-1,1] Kronrod nodes onto every panel. edges (..., P+1) -> (..., P*15)."""
    lo = edges[..., :-1]
    hi = edges[..., 1:]
    mid = 0.5 * (lo + hi)
    half = 0.5 * (hi - lo)
    nodes = mid[..., :, None] + half[..., :, None] * _XK
    return nodes.reshape(*edges.shape[:-1], -1), half


def _panel_sums(values: np.ndarray, half: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Kronrod value and |K15-G7| error per row from node values."""
    shaped = values.reshape(*half.shape, NODES_PER_PANEL)
    kron = (shaped * _WK).sum(axis=-1) * half
    gauss = (shaped[..., _GAUSS_IDX] * _WG).sum(axis=-1) * half
    err = np.abs(kron - gauss)
    return kron.sum(axis=-1), err.sum(axis=-1)


def integrate_rows(
    f,
    lower: np.ndarray,
    span: float = 60.0,
    rel_tol: float = 1e-10,
    abs_tol=0.0,
    max_refine: int = 8,
) -> tuple[np.ndarray, np.ndarray]:
    """Integrate every row i of ``f`` over [lower[i], lower[i] + span].

    Parameters
    ----------
    f : callable
        ``f(rows, y)`` with ``rows`` an int array of row indices and ``y``
        of shape (len(rows), M); returns integrand values of that shape.
    lower : ndarray
        Lower integration limits, one per row.
    span : float
        Length of each integration interval.
    rel_tol, abs_tol : float or ndarray
        Per-row error targets; a row is accepted when its Kronrod error
        estimate is below max(abs_tol, rel_tol * |value|).
    max_refine : int
        Panel-doubling rounds allowed for rows that miss the target.

    Returns
    -------
    (values, errors) : ndarray pair, one entry per row.

    Raises
    ------
    QuadratureError
        If a row still misses its tolerance after ``max_refine`` rounds.
    """
    lower = np.asarray(lower, dtype=float)
    n_rows = lower.shape[0]
    abs_tol = np.broadcast_to(np.asarray(abs_tol, dtype=float), (n_rows,))

    scale = span / _PANEL_EDGES[-1]
    edges = lower[:, None] + _PANEL_EDGES[None, :] * scale
    rows = np.arange(n_rows)
    nodes, half = _panel_nodes(edges)
    values, errors = _panel_sums(f(rows, nodes), half)

    tol = np.maximum(abs_tol, rel_tol * np.abs(values))
    bad = np.flatnonzero(~(errors <= tol))
    for i in bad:
        row_edges = edges[i]
        ok = False
        for _ in range(max_refine):
            # bisect every panel of this row
            mids = 0.5 * (row_edges[:-1] + row_edges[1:])
            row_edges = np.sort(np.concatenate([row_edges, mids]))
            nodes_i, half_i = _panel_nodes(row_edges[None, :])
            vals_i = f(np.array([i]), nodes_i)
            value, error = _panel_sums(vals_i, half_i)
            values[i], errors[i] = value[0], error[0]
            if errors[i] <= max(abs_tol[i], rel_tol * abs(values[i])):
                ok = True
                break
        if not ok:
            raise QuadratureError(
                f"quadrature row did not converge: error {errors[i]:.3e} "
                f"above tolerance after {max_refine} refinements",
                partial=float(values[i]),
                diagnostics={"row": int(i), "error": float(errors[i])},
            )
    return values, errors
