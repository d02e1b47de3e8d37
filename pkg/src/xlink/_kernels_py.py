"""Pure numpy implementations of the hot geometric kernels.

Used when the compiled ``_kernels`` extension is unavailable. Signatures and
results match the Cython versions exactly (same formulas, same edge rules).
"""
import numpy as np


def _angle(u, v):
    cross = np.cross(u, v)
    return np.arctan2(np.sqrt(np.sum(cross * cross, axis=-1)), np.sum(u * v, axis=-1))


def interferer_mask(rx_pos, rx_dir, pos, tx_dir, beam_edge, earth_radius):
    """Geometric interferer test of many candidates against one receiver per step.

    Args:
        rx_pos: (T, 3) receiver positions.
        rx_dir: (T, 3) receiver boresights.
        pos: (T, n, 3) candidate positions.
        tx_dir: (T, n, 3) candidate transmit boresights.
        beam_edge: inclusive off-boresight limit (half beamwidth + tolerance).
        earth_radius: blocking sphere radius.

    Returns:
        (mask, dist2): boolean (T, n) membership and squared distances.
    """
    rx_pos = np.asarray(rx_pos, dtype=float)
    pos = np.asarray(pos, dtype=float)
    a = rx_pos[:, None, :]
    to_cand = pos - a
    dist2 = np.sum(to_cand * to_cand, axis=-1)

    ab = np.sum(a * pos, axis=-1)
    aa = np.sum(a * a, axis=-1)
    bb = np.sum(pos * pos, axis=-1)
    re2 = earth_radius * earth_radius
    rs = ab * ab - aa * bb + (aa + bb) * re2 - 2.0 * re2 * ab
    blocked = (rs > 0) & (aa > ab) & (bb > ab)

    psi = _angle(np.asarray(rx_dir, dtype=float)[:, None, :], to_cand)
    psi_p = _angle(np.asarray(tx_dir, dtype=float), -to_cand)
    mask = ~blocked & (psi < beam_edge) & (psi_p < beam_edge) & (dist2 > 0)
    return mask, dist2


def _coplanar_geometry(theta, r_rx, r_int, n_rx, n_int):
    theta = np.asarray(theta, dtype=float)
    s, c = np.sin(theta), np.cos(theta)
    # receiver at (0, r_rx); boresight toward its transmitter pi/n_rx below horizontal
    ab_x = r_int * s
    ab_y = r_int * c - r_rx
    bx, by = np.cos(np.pi / n_rx), -np.sin(np.pi / n_rx)
    psi = np.arctan2(bx * ab_y - by * ab_x, bx * ab_x + by * ab_y)
    step = 2.0 * np.pi / n_int
    bd_x = r_int * (np.sin(theta - step) - s)
    bd_y = r_int * (np.cos(theta - step) - c)
    psi_p = np.abs(np.arctan2(bd_x * -ab_y - bd_y * -ab_x, bd_x * -ab_x + bd_y * -ab_y))
    return psi, psi_p, ab_x * ab_x + ab_y * ab_y


def coplanar_mask(theta, r_rx, r_int, n_rx, n_int, beam_edge, earth_radius):
    """Interferer test for a co-planar interferer at relative angle ``theta``.

    The receiver sits at angle 0 on radius ``r_rx`` and listens to its
    neighbour at +2*pi/n_rx; each interferer on radius ``r_int`` transmits to
    its neighbour at -2*pi/n_int.

    Returns:
        (mask, dist2, psi, psi_prime) arrays shaped like ``theta``.
    """
    psi, psi_p, dist2 = _coplanar_geometry(theta, r_rx, r_int, n_rx, n_int)
    if r_int >= r_rx:
        visible = psi > np.pi / n_rx - np.arccos(earth_radius / r_rx)
    else:
        theta = np.asarray(theta, dtype=float)
        ab = r_rx * r_int * np.cos(theta)
        aa, bb = r_rx * r_rx, r_int * r_int
        re2 = earth_radius * earth_radius
        rs = ab * ab - aa * bb + (aa + bb) * re2 - 2.0 * re2 * ab
        visible = ~((rs > 0) & (aa > ab) & (bb > ab))
    mask = visible & (np.abs(psi) < beam_edge) & (psi_p < beam_edge) & (dist2 > 0)
    return mask, dist2, psi, psi_p


def coplanar_any(theta, r_rx, r_int, n_rx, n_int, beam_edge, earth_radius):
    """True if any relative angle in ``theta`` yields an interferer."""
    mask = coplanar_mask(theta, r_rx, r_int, n_rx, n_int, beam_edge, earth_radius)[0]
    return bool(mask.any())
