"""Hot inner loops.

Every kernel has two bodies: a scalar-loop version compiled with numba
and a vectorised numpy version.  ``NUMBA`` / ``NUMPY`` expose both so the
benchmark can time them side by side; the module-level names pick one
according to :data:`renormlab._accel.HAVE_NUMBA`.  Both bodies perform the
same floating point operations in the same order, so results agree bit
for bit.
"""
import numpy as np

from ._accel import HAVE_NUMBA, njit, prange

# ---------------------------------------------------------------------------
# quadratic family  x -> a x (1 - x)


def _quad_iterate_loop(a, xs, n):
    out = np.empty_like(xs)
    for i in range(xs.shape[0]):
        x = xs[i]
        for _ in range(n):
            x = a * x * (1.0 - x)
        out[i] = x
    return out


def _quad_iterate_np(a, xs, n):
    x = np.array(xs, dtype=np.float64, copy=True)
    for _ in range(n):
        x = a * x * (1.0 - x)
    return x


def _quad_orbit_loop(a, x0, n):
    out = np.empty(n + 1)
    x = x0
    out[0] = x
    for k in range(n):
        x = a * x * (1.0 - x)
        out[k + 1] = x
    return out


def _quad_orbit_np(a, x0, n):
    out = np.empty(n + 1)
    x = float(x0)
    out[0] = x
    for k in range(n):
        x = a * x * (1.0 - x)
        out[k + 1] = x
    return out


# ---------------------------------------------------------------------------
# double-double arithmetic for deep iterates on small intervals
#
# A rescaled map H o f^N o H^-1 on an interval of width w loses about
# log2(1/w) bits to the affine change of variables and more along the
# orbit.  Carrying (hi, lo) pairs gives ~106 bits.  The helpers are plain
# arithmetic, so they run on scalars under numba and on arrays under numpy.

_SPLIT = 134217729.0  # 2**27 + 1


def _two_sum(a, b):
    s = a + b
    bb = s - a
    return s, (a - (s - bb)) + (b - bb)


def _quick_two_sum(a, b):
    s = a + b
    return s, b - (s - a)


def _split(a):
    t = _SPLIT * a
    hi = t - (t - a)
    return hi, a - hi


def _two_prod(a, b):
    p = a * b
    ah, al = _split(a)
    bh, bl = _split(b)
    return p, ((ah * bh - p) + ah * bl + al * bh) + al * bl


def _dd_add(xh, xl, yh, yl):
    s, e = _two_sum(xh, yh)
    return _quick_two_sum(s, e + (xl + yl))


def _dd_mul(xh, xl, yh, yl):
    p, e = _two_prod(xh, yh)
    return _quick_two_sum(p, e + (xh * yl + xl * yh))


def _dd_div(xh, xl, yh, yl):
    q1 = xh / yh
    ph, pl = _dd_mul(q1, 0.0 * q1, yh, yl)
    rh, rl = _dd_add(xh, xl, -ph, -pl)
    return _quick_two_sum(q1, rh / yh)


def _dd_quad_step(a, xh, xl):
    oh, ol = _dd_add(1.0 + 0.0 * xh, 0.0 * xh, -xh, -xl)
    th, tl = _dd_mul(xh, xl, oh, ol)
    return _dd_mul(a + 0.0 * xh, 0.0 * xh, th, tl)


def _rescaled_quad_np(a, u, v, orient, ts, n):
    ts = np.asarray(ts, dtype=np.float64)
    wh, wl = _two_sum(v, -u)
    zero = np.zeros_like(ts)
    th, tl = _dd_mul(ts, zero, wh + zero, wl + zero)
    if orient == 1:
        xh, xl = _dd_add(u + zero, zero, th, tl)
    else:
        xh, xl = _dd_add(v + zero, zero, -th, -tl)
    for _ in range(n):
        xh, xl = _dd_quad_step(a, xh, xl)
    if orient == 1:
        dh, dl = _dd_add(xh, xl, -u + zero, zero)
    else:
        dh, dl = _dd_add(v + zero, zero, -xh, -xl)
    rh, rl = _dd_div(dh, dl, wh + zero, wl + zero)
    return rh + rl


if HAVE_NUMBA:
    _nb_two_sum = njit(inline="always")(_two_sum)
    _nb_quick_two_sum = njit(inline="always")(_quick_two_sum)
    _nb_split = njit(inline="always")(_split)

    @njit(inline="always")
    def _nb_two_prod(a, b):
        p = a * b
        ah, al = _nb_split(a)
        bh, bl = _nb_split(b)
        return p, ((ah * bh - p) + ah * bl + al * bh) + al * bl

    @njit(inline="always")
    def _nb_dd_add(xh, xl, yh, yl):
        s, e = _nb_two_sum(xh, yh)
        return _nb_quick_two_sum(s, e + (xl + yl))

    @njit(inline="always")
    def _nb_dd_mul(xh, xl, yh, yl):
        p, e = _nb_two_prod(xh, yh)
        return _nb_quick_two_sum(p, e + (xh * yl + xl * yh))

    @njit(inline="always")
    def _nb_dd_div(xh, xl, yh, yl):
        q1 = xh / yh
        ph, pl = _nb_dd_mul(q1, 0.0, yh, yl)
        rh, rl = _nb_dd_add(xh, xl, -ph, -pl)
        return _nb_quick_two_sum(q1, rh / yh)

    @njit(cache=True, parallel=True)
    def _rescaled_quad_nb(a, u, v, orient, ts, n):
        out = np.empty_like(ts)
        wh, wl = _nb_two_sum(v, -u)
        for i in prange(ts.shape[0]):
            th, tl = _nb_dd_mul(ts[i], 0.0, wh, wl)
            if orient == 1:
                xh, xl = _nb_dd_add(u, 0.0, th, tl)
            else:
                xh, xl = _nb_dd_add(v, 0.0, -th, -tl)
            for _ in range(n):
                oh, ol = _nb_dd_add(1.0, 0.0, -xh, -xl)
                qh, ql = _nb_dd_mul(xh, xl, oh, ol)
                xh, xl = _nb_dd_mul(a, 0.0, qh, ql)
            if orient == 1:
                dh, dl = _nb_dd_add(xh, xl, -u, 0.0)
            else:
                dh, dl = _nb_dd_add(v, 0.0, -xh, -xl)
            rh, rl = _nb_dd_div(dh, dl, wh, wl)
            out[i] = rh + rl
        return out


# ---------------------------------------------------------------------------
# greedy (n, eps)-separated set over precomputed trajectories


def _separation_loop(traj, eps):
    g, m = traj.shape
    kept = np.empty(g, dtype=np.int64)
    count = 0
    for i in range(g):
        separated = True
        # most recently kept points are the nearest ones on a sorted grid
        for jj in range(count - 1, -1, -1):
            j = kept[jj]
            far = False
            for k in range(m):
                if abs(traj[i, k] - traj[j, k]) > eps:
                    far = True
                    break
            if not far:
                separated = False
                break
        if separated:
            kept[count] = i
            count += 1
    return count


def _separation_np(traj, eps):
    g = traj.shape[0]
    kept = np.empty(traj.shape, dtype=np.float64)
    count = 0
    for i in range(g):
        if count:
            d = np.abs(kept[:count] - traj[i]).max(axis=1)
            if (d <= eps).any():
                continue
        kept[count] = traj[i]
        count += 1
    return count


# ---------------------------------------------------------------------------
# Henon map (x, y) -> (1 - a x^2 + y, b x)


def _henon_fate_loop(a, b, x, y, n_max, radius, lag_max, tol, confirm):
    """Return (status, step, lag, x, y); status 0 undecided, 1 escaped, 2 periodic."""
    hx = np.empty(lag_max + 1)
    hy = np.empty(lag_max + 1)
    streak = np.zeros(lag_max + 1, dtype=np.int64)
    hx[0] = x
    hy[0] = y
    for t in range(1, n_max + 1):
        nx = 1.0 - a * x * x + y
        ny = b * x
        x = nx
        y = ny
        if not (x * x + y * y <= radius * radius):
            return 1, t, 0, x, y
        slot = t % (lag_max + 1)
        hx[slot] = x
        hy[slot] = y
        top = lag_max if t >= lag_max else t
        for lag in range(1, top + 1):
            s = (t - lag) % (lag_max + 1)
            dx = x - hx[s]
            dy = y - hy[s]
            if dx * dx + dy * dy < tol * tol:
                streak[lag] += 1
                if streak[lag] >= confirm:
                    return 2, t, lag, x, y
            else:
                streak[lag] = 0
    return 0, n_max, 0, x, y


def _henon_fate_np(a, b, x, y, n_max, radius, lag_max, tol, confirm):
    pts = np.empty((n_max + 1, 2))
    pts[0] = x, y
    last = n_max
    escaped = False
    for t in range(1, n_max + 1):
        x, y = 1.0 - a * x * x + y, b * x
        pts[t] = x, y
        if not (x * x + y * y <= radius * radius):
            last, escaped = t, True
            break
    span = last if escaped else last + 1
    best_t, best_lag = None, 0
    for lag in range(1, lag_max + 1):
        if lag >= span:
            break
        d = pts[lag:span] - pts[: span - lag]
        hit = (d * d).sum(axis=1) < tol * tol
        if len(hit) < confirm:
            continue
        c = np.concatenate(([0], np.cumsum(hit)))
        full = np.nonzero(c[confirm:] - c[:-confirm] == confirm)[0]
        if len(full):
            t = int(full[0]) + confirm - 1 + lag
            if best_t is None or t < best_t:
                best_t, best_lag = t, lag
    if best_t is not None:
        return 2, best_t, best_lag, pts[best_t, 0], pts[best_t, 1]
    if escaped:
        return 1, last, 0, x, y
    return 0, n_max, 0, x, y


def _henon_keep_loop(a, b, x, y, n_transient, n_keep, radius):
    """Discard a transient, keep n_keep points.  Returns (points, escape_step or -1)."""
    out = np.empty((n_keep, 2))
    for t in range(n_transient + n_keep):
        nx = 1.0 - a * x * x + y
        y = b * x
        x = nx
        if not (x * x + y * y <= radius * radius):
            return out, t + 1
        if t >= n_transient:
            out[t - n_transient, 0] = x
            out[t - n_transient, 1] = y
    return out, -1


def _henon_keep_np(a, b, x, y, n_transient, n_keep, radius):
    out = np.empty((n_keep, 2))
    for t in range(n_transient + n_keep):
        nx = 1.0 - a * x * x + y
        y = b * x
        x = nx
        if not (x * x + y * y <= radius * radius):
            return out, t + 1
        if t >= n_transient:
            out[t - n_transient, 0] = x
            out[t - n_transient, 1] = y
    return out, -1


def _henon_newton_loop(a, b, seeds, tau, max_iter, tol):
    """Damped Newton on f^tau(z) - z from each seed.  Returns (z, residual)."""
    n = seeds.shape[0]
    z_out = np.empty((n, 2))
    res_out = np.empty(n)
    for s in prange(n):
        zx = seeds[s, 0]
        zy = seeds[s, 1]
        res = np.inf
        for _ in range(max_iter):
            # f^tau and its Jacobian by the chain rule
            x = zx
            y = zy
            j00 = 1.0
            j01 = 0.0
            j10 = 0.0
            j11 = 1.0
            for _k in range(tau):
                d00 = -2.0 * a * x
                n00 = d00 * j00 + j10
                n01 = d00 * j01 + j11
                n10 = b * j00
                n11 = b * j01
                j00, j01, j10, j11 = n00, n01, n10, n11
                nx = 1.0 - a * x * x + y
                y = b * x
                x = nx
            fx = x - zx
            fy = y - zy
            res = np.sqrt(fx * fx + fy * fy)
            if not np.isfinite(res) or res > 1e6:
                res = np.inf
                break
            if res < tol:
                break
            m00 = j00 - 1.0
            m11 = j11 - 1.0
            det = m00 * m11 - j01 * j10
            if det == 0.0 or not np.isfinite(det):
                res = np.inf
                break
            sx = (m11 * fx - j01 * fy) / det
            sy = (-j10 * fx + m00 * fy) / det
            lam = 1.0
            improved = False
            for _h in range(12):
                tx = zx - lam * sx
                ty = zy - lam * sy
                x = tx
                y = ty
                ok = True
                for _k in range(tau):
                    nx = 1.0 - a * x * x + y
                    y = b * x
                    x = nx
                    if not (abs(x) < 1e8):
                        ok = False
                        break
                if ok:
                    gx = x - tx
                    gy = y - ty
                    r2 = np.sqrt(gx * gx + gy * gy)
                    if r2 < res:
                        zx = tx
                        zy = ty
                        improved = True
                        break
                lam *= 0.5
            if not improved:
                break
        z_out[s, 0] = zx
        z_out[s, 1] = zy
        res_out[s] = res
    return z_out, res_out


def _henon_newton_np(a, b, seeds, tau, max_iter, tol):
    z = np.array(seeds, dtype=np.float64, copy=True)
    n = len(z)
    res = np.full(n, np.inf)
    active = np.ones(n, dtype=bool)

    def image(zx, zy):
        x, y = zx.copy(), zy.copy()
        with np.errstate(over="ignore", invalid="ignore"):
            for _ in range(tau):
                x, y = 1.0 - a * x * x + y, b * x
        return x, y

    with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
        for _ in range(max_iter):
            idx = np.nonzero(active)[0]
            if not len(idx):
                break
            zx, zy = z[idx, 0], z[idx, 1]
            x, y = zx.copy(), zy.copy()
            j00 = np.ones_like(x)
            j01 = np.zeros_like(x)
            j10 = np.zeros_like(x)
            j11 = np.ones_like(x)
            for _k in range(tau):
                d00 = -2.0 * a * x
                j00, j01, j10, j11 = d00 * j00 + j10, d00 * j01 + j11, b * j00, b * j01
                x, y = 1.0 - a * x * x + y, b * x
            fx, fy = x - zx, y - zy
            r = np.sqrt(fx * fx + fy * fy)
            bad = ~np.isfinite(r) | (r > 1e6)
            r[bad] = np.inf
            res[idx] = r
            done = bad | (r < tol)
            m00, m11 = j00 - 1.0, j11 - 1.0
            det = m00 * m11 - j01 * j10
            sing = (det == 0.0) | ~np.isfinite(det)
            res[idx[sing & ~done]] = np.inf
            done |= sing
            sx = (m11 * fx - j01 * fy) / det
            sy = (-j10 * fx + m00 * fy) / det
            lam = np.ones_like(x)
            improved = np.zeros(len(idx), dtype=bool)
            for _h in range(12):
                pend = ~improved & ~done
                if not pend.any():
                    break
                tx, ty = zx - lam * sx, zy - lam * sy
                gx, gy = image(tx, ty)
                ok = np.isfinite(gx) & (np.abs(gx) < 1e8)
                r2 = np.sqrt((gx - tx) ** 2 + (gy - ty) ** 2)
                acc = pend & ok & (r2 < r)
                zx = np.where(acc, tx, zx)
                zy = np.where(acc, ty, zy)
                improved |= acc
                lam = np.where(improved, lam, lam * 0.5)
            z[idx, 0], z[idx, 1] = zx, zy
            active[idx[done | ~improved]] = False
    return z, res


# ---------------------------------------------------------------------------
# bifurcation diagram raster


def _bifurcation_loop(a_values, height, n_transient, n_plot, x0):
    width = a_values.shape[0]
    img = np.zeros((height, width), dtype=np.uint8)
    for col in prange(width):
        a = a_values[col]
        x = x0
        for _ in range(n_transient):
            x = a * x * (1.0 - x)
        for _ in range(n_plot):
            x = a * x * (1.0 - x)
            row = int((1.0 - x) * (height - 1) + 0.5)
            if 0 <= row < height:
                img[row, col] = 1
    return img


def _bifurcation_np(a_values, height, n_transient, n_plot, x0):
    width = a_values.shape[0]
    img = np.zeros((height, width), dtype=np.uint8)
    a = np.asarray(a_values, dtype=np.float64)
    x = np.full(width, float(x0))
    cols = np.arange(width)
    for _ in range(n_transient):
        x = a * x * (1.0 - x)
    for _ in range(n_plot):
        x = a * x * (1.0 - x)
        row = ((1.0 - x) * (height - 1) + 0.5).astype(np.int64)
        ok = (row >= 0) & (row < height)
        img[row[ok], cols[ok]] = 1
    return img


NUMPY = {
    "quad_iterate": _quad_iterate_np,
    "quad_orbit": _quad_orbit_np,
    "separation": _separation_np,
    "henon_fate": _henon_fate_np,
    "henon_keep": _henon_keep_np,
    "henon_newton": _henon_newton_np,
    "bifurcation": _bifurcation_np,
    "rescaled_quad": _rescaled_quad_np,
}

if HAVE_NUMBA:
    NUMBA = {
        "quad_iterate": njit(cache=True)(_quad_iterate_loop),
        "quad_orbit": njit(cache=True)(_quad_orbit_loop),
        "separation": njit(cache=True)(_separation_loop),
        "henon_fate": njit(cache=True)(_henon_fate_loop),
        "henon_keep": njit(cache=True)(_henon_keep_loop),
        "henon_newton": njit(cache=True, parallel=True)(_henon_newton_loop),
        "bifurcation": njit(cache=True, parallel=True)(_bifurcation_loop),
        "rescaled_quad": _rescaled_quad_nb,
    }
    ACTIVE = NUMBA
else:
    NUMBA = None
    ACTIVE = NUMPY


def quad_iterate(a, xs, n):
    """f_a^n applied elementwise to a float64 array."""
    xs = np.ascontiguousarray(xs, dtype=np.float64)
    return ACTIVE["quad_iterate"](float(a), xs, int(n))


def quad_orbit(a, x0, n):
    return ACTIVE["quad_orbit"](float(a), float(x0), int(n))


def separation(traj, eps):
    return int(ACTIVE["separation"](np.ascontiguousarray(traj, dtype=np.float64), float(eps)))


def henon_fate(a, b, x, y, n_max, radius, lag_max, tol, confirm):
    status, step, lag, x, y = ACTIVE["henon_fate"](
        float(a), float(b), float(x), float(y), int(n_max), float(radius), int(lag_max), float(tol), int(confirm)
    )
    return int(status), int(step), int(lag), float(x), float(y)


def henon_keep(a, b, x, y, n_transient, n_keep, radius):
    pts, esc = ACTIVE["henon_keep"](float(a), float(b), float(x), float(y), int(n_transient), int(n_keep), float(radius))
    return pts, int(esc)


def henon_newton(a, b, seeds, tau, max_iter=60, tol=1e-11):
    seeds = np.ascontiguousarray(seeds, dtype=np.float64).reshape(-1, 2)
    return ACTIVE["henon_newton"](float(a), float(b), seeds, int(tau), int(max_iter), float(tol))


def bifurcation(a_values, height, n_transient, n_plot, x0=0.5):
    a_values = np.ascontiguousarray(a_values, dtype=np.float64)
    return ACTIVE["bifurcation"](a_values, int(height), int(n_transient), int(n_plot), float(x0))


def rescaled_quad(a, u, v, orient, ts, n):
    """H o f_a^n o H^-1 in double-double, H the affine map of [u, v] onto [0, 1]."""
    ts = np.ascontiguousarray(ts, dtype=np.float64)
    return ACTIVE["rescaled_quad"](float(a), float(u), float(v), int(orient), ts, int(n))
