"""Pure-Python reference kernel for the stack objective.

Mirrors ``_kernels_c.pyx`` statement for statement (same operations in the
same order, libm transcendentals in both) so the two backends agree to the
last bit on any platform that compiles the extension with FP contraction
disabled.  Keep the two files in sync when editing either.

State layout per movable unit: (height mm, twist rad, tilt_x rad, tilt_y rad)
where (tilt_x, tilt_y) = bend_angle * (cos azimuth, sin azimuth).  The top
hexagon vertex k of a unit is R_tilt(omega) @ [a2*cos(g), a2*sin(g), h] with
g = hex azimuth + twist and omega = (-tilt_y, tilt_x, 0); Rodrigues terms are
series-expanded near zero tilt so the parameterisation stays smooth.
"""

import math

# Below this tilt angle (rad) the Rodrigues coefficients use their series.
_TILT_EPS = 1e-4
# Edge lengths below this (mm) get a zero direction gradient (crushed edge).
_LEN_EPS = 1e-12


def stack_objective(x, a1, a2, shift, b_rest, d_rest, kf, kc,
                    cols, l_base, l_cmd, weight,
                    cos_tab, sin_tab, grad_out, tendon_out):
    """Objective F and gradient for the movable units of a stack.

    F = elastic energy of slant (mountain, stiffness kf) and tendon-diagonal
    (valley, stiffness kc) edges, plus a one-sided quadratic penalty
    0.5*weight*max(0, L_t - l_cmd_t)^2 per tendon.  Valley lengths are summed
    as tendon lengths into ``tendon_out`` (locked-unit contributions enter
    through ``l_base``); the gradient lands in ``grad_out``.  Returns F.
    """
    m = len(a1)
    for i in range(4 * m):
        grad_out[i] = 0.0

    val_store = [[0.0] * 6 for _ in range(m)]
    dval_store = [[[0.0] * 4 for _ in range(6)] for _ in range(m)]

    energy = 0.0
    for j in range(m):
        h = float(x[4 * j])
        th = float(x[4 * j + 1])
        u = float(x[4 * j + 2])
        v = float(x[4 * j + 3])
        ra1 = float(a1[j])
        ra2 = float(a2[j])
        rb = float(b_rest[j])
        rd = float(d_rest[j])
        s = int(shift[j])

        b2 = u * u + v * v
        beta = math.sqrt(b2)
        if beta < _TILT_EPS:
            ca = 1.0 - b2 / 6.0 + b2 * b2 / 120.0
            cb = 0.5 - b2 / 24.0 + b2 * b2 / 720.0
            cap = -1.0 / 3.0 + b2 / 30.0 - b2 * b2 / 840.0
            cbp = -1.0 / 12.0 + b2 / 180.0 - b2 * b2 / 6720.0
        else:
            sb = math.sin(beta)
            csb = math.cos(beta)
            ca = sb / beta
            cb = (1.0 - csb) / b2
            cap = (beta * csb - sb) / (b2 * beta)
            cbp = (beta * sb - 2.0 * (1.0 - csb)) / (b2 * b2)

        cth = math.cos(th)
        sth = math.sin(th)
        wx = -v
        wy = u

        gj = [0.0, 0.0, 0.0, 0.0]
        for k in range(6):
            ck = float(cos_tab[k])
            sk = float(sin_tab[k])
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

            # partials of T wrt (h, th, u, v)
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

            # mountain edge: bottom vertex k -> top vertex k
            ex = tx - ra1 * ck
            ey = ty - ra1 * sk
            ez = tz
            ln = math.sqrt(ex * ex + ey * ey + ez * ez)
            if ln > _LEN_EPS:
                coef = kf * (ln - rb) / ln
                gj[0] += coef * (ex * dhx + ey * dhy + ez * dhz)
                gj[1] += coef * (ex * dtx + ey * dty + ez * dtz)
                gj[2] += coef * (ex * dux + ey * duy + ez * duz)
                gj[3] += coef * (ex * dvx + ey * dvy + ez * dvz)
            dev = ln - rb
            energy += 0.5 * kf * dev * dev

            # valley edge ending at top vertex k: bottom vertex (k - s) mod 6
            kv = (k - s) % 6
            ex = tx - ra1 * float(cos_tab[kv])
            ey = ty - ra1 * float(sin_tab[kv])
            ez = tz
            ln = math.sqrt(ex * ex + ey * ey + ez * ez)
            val_store[j][kv] = ln
            dv_row = dval_store[j][kv]
            if ln > _LEN_EPS:
                inv = 1.0 / ln
                dv_row[0] = inv * (ex * dhx + ey * dhy + ez * dhz)
                dv_row[1] = inv * (ex * dtx + ey * dty + ez * dtz)
                dv_row[2] = inv * (ex * dux + ey * duy + ez * duz)
                dv_row[3] = inv * (ex * dvx + ey * dvy + ez * dvz)
            else:
                dv_row[0] = dv_row[1] = dv_row[2] = dv_row[3] = 0.0

        for kv in range(6):
            dev = val_store[j][kv] - rd
            energy += 0.5 * kc * dev * dev
            coef = kc * dev
            dv_row = dval_store[j][kv]
            gj[0] += coef * dv_row[0]
            gj[1] += coef * dv_row[1]
            gj[2] += coef * dv_row[2]
            gj[3] += coef * dv_row[3]

        grad_out[4 * j] = gj[0]
        grad_out[4 * j + 1] = gj[1]
        grad_out[4 * j + 2] = gj[2]
        grad_out[4 * j + 3] = gj[3]

    for t in range(6):
        total = float(l_base[t])
        for j in range(m):
            total += val_store[j][int(cols[t][j])]
        tendon_out[t] = total
        if weight > 0.0:
            gap = total - float(l_cmd[t])
            if gap > 0.0:
                energy += 0.5 * weight * gap * gap
                coef = weight * gap
                for j in range(m):
                    c = int(cols[t][j])
                    dv_row = dval_store[j][c]
                    grad_out[4 * j] += coef * dv_row[0]
                    grad_out[4 * j + 1] += coef * dv_row[1]
                    grad_out[4 * j + 2] += coef * dv_row[2]
                    grad_out[4 * j + 3] += coef * dv_row[3]

    return energy
