# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled hot kernels; drop-in replacements for ``_kernels_py``."""
import numpy as np
cimport numpy as cnp
from libc.math cimport atan2, sqrt, sin, cos, acos, fabs, M_PI

cnp.import_array()


cdef inline double _angle3(double ux, double uy, double uz,
                           double vx, double vy, double vz) noexcept nogil:
    cdef double cx = uy * vz - uz * vy
    cdef double cy = uz * vx - ux * vz
    cdef double cz = ux * vy - uy * vx
    return atan2(sqrt(cx * cx + cy * cy + cz * cz), ux * vx + uy * vy + uz * vz)


def interferer_mask(rx_pos, rx_dir, pos, tx_dir, double beam_edge, double earth_radius):
    cdef double[:, ::1] rp = np.ascontiguousarray(rx_pos, dtype=np.float64)
    cdef double[:, ::1] rd = np.ascontiguousarray(rx_dir, dtype=np.float64)
    cdef double[:, :, ::1] p = np.ascontiguousarray(pos, dtype=np.float64)
    cdef double[:, :, ::1] td = np.ascontiguousarray(tx_dir, dtype=np.float64)
    cdef Py_ssize_t T = p.shape[0], n = p.shape[1], t, k
    out_mask = np.zeros((T, n), dtype=np.uint8)
    out_d2 = np.empty((T, n), dtype=np.float64)
    cdef unsigned char[:, ::1] m = out_mask
    cdef double[:, ::1] d2 = out_d2
    cdef double ax, ay, az, dx, dy, dz, ab, aa, bb, rs, dd
    cdef double re2 = earth_radius * earth_radius
    with nogil:
        for t in range(T):
            ax = rp[t, 0]; ay = rp[t, 1]; az = rp[t, 2]
            aa = ax * ax + ay * ay + az * az
            for k in range(n):
                dx = p[t, k, 0] - ax
                dy = p[t, k, 1] - ay
                dz = p[t, k, 2] - az
                dd = dx * dx + dy * dy + dz * dz
                d2[t, k] = dd
                if dd <= 0:
                    continue
                if _angle3(rd[t, 0], rd[t, 1], rd[t, 2], dx, dy, dz) >= beam_edge:
                    continue
                if _angle3(td[t, k, 0], td[t, k, 1], td[t, k, 2], -dx, -dy, -dz) >= beam_edge:
                    continue
                ab = ax * p[t, k, 0] + ay * p[t, k, 1] + az * p[t, k, 2]
                bb = p[t, k, 0] * p[t, k, 0] + p[t, k, 1] * p[t, k, 1] + p[t, k, 2] * p[t, k, 2]
                rs = ab * ab - aa * bb + (aa + bb) * re2 - 2.0 * re2 * ab
                if rs > 0 and aa > ab and bb > ab:
                    continue
                m[t, k] = 1
    return out_mask.view(bool), out_d2


cdef inline bint _coplanar_one(double th, double r_rx, double r_int, double bx, double by,
                               double step, double beam_edge, double horizon,
                               double re2, double *dist2, double *psi_out,
                               double *psip_out) noexcept nogil:
    cdef double s = sin(th), c = cos(th)
    cdef double abx = r_int * s
    cdef double aby = r_int * c - r_rx
    cdef double psi = atan2(bx * aby - by * abx, bx * abx + by * aby)
    cdef double bdx = r_int * (sin(th - step) - s)
    cdef double bdy = r_int * (cos(th - step) - c)
    cdef double psip = fabs(atan2(bdx * -aby - bdy * -abx, bdx * -abx + bdy * -aby))
    cdef double ab, aa, bb, rs
    dist2[0] = abx * abx + aby * aby
    psi_out[0] = psi
    psip_out[0] = psip
    if dist2[0] <= 0:
        return 0
    if fabs(psi) >= beam_edge or psip >= beam_edge:
        return 0
    if r_int >= r_rx:
        return psi > horizon
    ab = r_rx * r_int * c
    aa = r_rx * r_rx
    bb = r_int * r_int
    rs = ab * ab - aa * bb + (aa + bb) * re2 - 2.0 * re2 * ab
    return not (rs > 0 and aa > ab and bb > ab)


def coplanar_mask(theta, double r_rx, double r_int, int n_rx, int n_int,
                  double beam_edge, double earth_radius):
    th_arr = np.asarray(theta, dtype=np.float64)
    shape = th_arr.shape
    cdef double[::1] th = np.ascontiguousarray(th_arr.ravel())
    cdef Py_ssize_t M = th.shape[0], k
    out_mask = np.zeros(M, dtype=np.uint8)
    out_d2 = np.empty(M, dtype=np.float64)
    out_psi = np.empty(M, dtype=np.float64)
    out_psip = np.empty(M, dtype=np.float64)
    cdef unsigned char[::1] m = out_mask
    cdef double[::1] d2 = out_d2, ps = out_psi, pp = out_psip
    cdef double bx = cos(M_PI / n_rx), by = -sin(M_PI / n_rx)
    cdef double step = 2.0 * M_PI / n_int
    cdef double horizon = M_PI / n_rx - acos(earth_radius / r_rx)
    cdef double re2 = earth_radius * earth_radius
    with nogil:
        for k in range(M):
            m[k] = _coplanar_one(th[k], r_rx, r_int, bx, by, step, beam_edge, horizon,
                                 re2, &d2[k], &ps[k], &pp[k])
    return (out_mask.view(bool).reshape(shape), out_d2.reshape(shape),
            out_psi.reshape(shape), out_psip.reshape(shape))


def coplanar_any(theta, double r_rx, double r_int, int n_rx, int n_int,
                 double beam_edge, double earth_radius):
    cdef double[::1] th = np.ascontiguousarray(np.asarray(theta, dtype=np.float64).ravel())
    cdef Py_ssize_t M = th.shape[0], k
    cdef double bx = cos(M_PI / n_rx), by = -sin(M_PI / n_rx)
    cdef double step = 2.0 * M_PI / n_int
    cdef double horizon = M_PI / n_rx - acos(earth_radius / r_rx)
    cdef double re2 = earth_radius * earth_radius
    cdef double d2, ps, pp
    cdef bint found = 0
    with nogil:
        for k in range(M):
            if _coplanar_one(th[k], r_rx, r_int, bx, by, step, beam_edge, horizon,
                             re2, &d2, &ps, &pp):
                found = 1
                break
    return bool(found)
