# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled kernel for the stack objective.

Statement-for-statement twin of ``_kernels_ref.py``; see that module for the
math.  Compile with FP contraction off so both backends produce identical
bits.  Keep the two files in sync when editing either.
"""

from libc.math cimport cos, sin, sqrt

DEF TILT_EPS = 1e-4
DEF LEN_EPS = 1e-12
DEF MAX_UNITS = 8


def stack_objective(double[::1] x, double[::1] a1, double[::1] a2,
                    long[::1] shift, double[::1] b_rest, double[::1] d_rest,
                    double kf, double kc, long[:, ::1] cols,
                    double[::1] l_base, double[::1] l_cmd, double weight,
                    double[::1] cos_tab, double[::1] sin_tab,
                    double[::1] grad_out, double[::1] tendon_out):
    """Objective F and gradient for the movable units of a stack.

    Same contract as the reference kernel: fills ``grad_out`` (4 per unit)
    and ``tendon_out`` (6), returns F.
    """
    cdef int m = a1.shape[0]
    if m > MAX_UNITS:
        raise ValueError("kernel supports at most 8 movable units")

    cdef double val_store[MAX_UNITS][6]
    cdef double dval_store[MAX_UNITS][6][4]
    cdef double gj[4]

    cdef int i, j, k, kv, s, t, c
    cdef double h, th, u, v, ra1, ra2, rb, rd
    cdef double b2, beta, sb, csb, ca, cb, cap, cbp
    cdef double cth, sth, wx, wy
    cdef double ck, sk, cg, sg, px, py, pz
    cdef double w1x, w1y, w1z, w2x, w2y, w2z
    cdef double tx, ty, tz
    cdef double dhx, dhy, dhz, qx, qy, zeta, dtx, dty, dtz
    cdef double apu, bpu, dux, duy, duz, apv, bpv, dvx, dvy, dvz
    cdef double ex, ey, ez, ln, coef, dev, inv, total, gap
    cdef double energy = 0.0

    for i in range(4 * m):
        grad_out[i] = 0.0

    for j in range(m):
        h = x[4 * j]
        th = x[4 * j + 1]
        u = x[4 * j + 2]
        v = x[4 * j + 3]
        ra1 = a1[j]
        ra2 = a2[j]
        rb = b_rest[j]
        rd = d_rest[j]
        s = <int>shift[j]

        b2 = u * u + v * v
        beta = sqrt(b2)
        if beta < TILT_EPS:
            ca = 1.0 - b2 / 6.0 + b2 * b2 / 120.0
            cb = 0.5 - b2 / 24.0 + b2 * b2 / 720.0
            cap = -1.0 / 3.0 + b2 / 30.0 - b2 * b2 / 840.0
            cbp = -1.0 / 12.0 + b2 / 180.0 - b2 * b2 / 6720.0
        else:
            sb = sin(beta)
            csb = cos(beta)
            ca = sb / beta
            cb = (1.0 - csb) / b2
            cap = (beta * csb - sb) / (b2 * beta)
            cbp = (beta * sb - 2.0 * (1.0 - csb)) / (b2 * b2)

        cth = cos(th)
        sth = sin(th)
        wx = -v
        wy = u

        gj[0] = 0.0
        gj[1] = 0.0
        gj[2] = 0.0
        gj[3] = 0.0
        for k in range(6):
            ck = cos_tab[k]
            sk = sin_tab[k]
            cg = ck * cth - sk * sth
            sg = sk * cth + ck * sth
            px = ra2 * cg
            py = ra2 * sg
            pz = h

            w1x = u * pz
            w1y = v * pz
            w1z = wx * py - wy * px
            w2x = u * w1z
            w2y = v * w1z
            w2z = wx * w1y - wy * w1x

            tx = px + ca * w1x + cb * w2x
            ty = py + ca * w1y + cb * w2y
            tz = pz + ca * w1z + cb * w2z

            dhx = ca * u
            dhy = ca * v
            dhz = 1.0 - cb * b2

            qx = -py
            qy = px
            zeta = wx * qy - wy * qx
            dtx = qx + cb * u * zeta
            dty = qy + cb * v * zeta
            dtz = ca * zeta

            apu = cap * u
            bpu = cbp * u
            dux = apu * w1x + ca * pz + bpu * w2x + cb * (w1z - u * px)
            duy = apu * w1y + bpu * w2y + cb * (-v * px)
            duz = apu * w1z - ca * px + bpu * w2z + cb * (-w1x - u * pz)

            apv = cap * v
            bpv = cbp * v
            dvx = apv * w1x + bpv * w2x + cb * (-u * py)
            dvy = apv * w1y + ca * pz + bpv * w2y + cb * (w1z - v * py)
            dvz = apv * w1z - ca * py + bpv * w2z + cb * (-w1y - v * pz)

            ex = tx - ra1 * ck
            ey = ty - ra1 * sk
            ez = tz
            ln = sqrt(ex * ex + ey * ey + ez * ez)
            if ln > LEN_EPS:
                coef = kf * (ln - rb) / ln
                gj[0] += coef * (ex * dhx + ey * dhy + ez * dhz)
                gj[1] += coef * (ex * dtx + ey * dty + ez * dtz)
                gj[2] += coef * (ex * dux + ey * duy + ez * duz)
                gj[3] += coef * (ex * dvx + ey * dvy + ez * dvz)
            dev = ln - rb
            energy += 0.5 * kf * dev * dev

            kv = (k - s) % 6
            if kv < 0:
                kv += 6
            ex = tx - ra1 * cos_tab[kv]
            ey = ty - ra1 * sin_tab[kv]
            ez = tz
            ln = sqrt(ex * ex + ey * ey + ez * ez)
            val_store[j][kv] = ln
            if ln > LEN_EPS:
                inv = 1.0 / ln
                dval_store[j][kv][0] = inv * (ex * dhx + ey * dhy + ez * dhz)
                dval_store[j][kv][1] = inv * (ex * dtx + ey * dty + ez * dtz)
                dval_store[j][kv][2] = inv * (ex * dux + ey * duy + ez * duz)
                dval_store[j][kv][3] = inv * (ex * dvx + ey * dvy + ez * dvz)
            else:
                dval_store[j][kv][0] = 0.0
                dval_store[j][kv][1] = 0.0
                dval_store[j][kv][2] = 0.0
                dval_store[j][kv][3] = 0.0

        for kv in range(6):
            dev = val_store[j][kv] - rd
            energy += 0.5 * kc * dev * dev
            coef = kc * dev
            gj[0] += coef * dval_store[j][kv][0]
            gj[1] += coef * dval_store[j][kv][1]
            gj[2] += coef * dval_store[j][kv][2]
            gj[3] += coef * dval_store[j][kv][3]

        grad_out[4 * j] = gj[0]
        grad_out[4 * j + 1] = gj[1]
        grad_out[4 * j + 2] = gj[2]
        grad_out[4 * j + 3] = gj[3]

    for t in range(6):
        total = l_base[t]
        for j in range(m):
            total += val_store[j][<int>cols[t, j]]
        tendon_out[t] = total
        if weight > 0.0:
            gap = total - l_cmd[t]
            if gap > 0.0:
                energy += 0.5 * weight * gap * gap
                coef = weight * gap
                for j in range(m):
                    c = <int>cols[t, j]
                    grad_out[4 * j] += coef * dval_store[j][c][0]
                    grad_out[4 * j + 1] += coef * dval_store[j][c][1]
                    grad_out[4 * j + 2] += coef * dval_store[j][c][2]
                    grad_out[4 * j + 3] += coef * dval_store[j][c][3]

    return energy
