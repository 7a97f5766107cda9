"""Primal-dual interior-point method on the homogeneous self-dual embedding.

The cone problem is brought to the standard form::

    minimize  c @ x   s.t.  G x + s = h,  A x = b,  s in K

with ``x = y``, ``G = -F`` (the block coefficient maps), ``h`` the block
constants and ``A, b`` from the equalities.  Iterates are scaled with the
Nesterov-Todd point and directions use Mehrotra's predictor-corrector.
"""
from __future__ import annotations

import numpy as np
import scipy.linalg as la
import scipy.sparse as sp

from .cone import ConeProblem, Solution

MAX_BLOCK = 400
MAX_ENTRIES = 50000
# flop budget (rows * m^2) below which the KKT system is factored by QR
QR_BUDGET = 2e10
# backward error of a KKT solve beyond which a search direction is rejected
KKT_ACCURACY = 1e-6
# iterations without improving the best iterate before giving up
STALL_ITERS = 8


class ProblemTooLarge(RuntimeError):
    """Problem exceeds the in-process guardrail; export it instead."""


class _NumericalFailure(Exception):
    pass


# -- cone helpers ------------------------------------------------------------

class _Scaling:
    """Nesterov-Todd scaling of one block.

    PSD blocks keep ``r`` and ``rti = r^{-T}`` with ``r^T z r = lam`` and
    ``r^{-1} s r^{-T} = lam``; LP blocks keep ``d = sqrt(s / z)``.
    """

    def __init__(self, n: int, diagonal: bool):
        self.n = n
        self.diagonal = diagonal
        self.lam = np.ones(n)
        if diagonal:
            self.d = np.ones(n)
        else:
            self.r = np.eye(n)
            self.rti = np.eye(n)

    # W z, W^{-T} s, W^T u, (W^T W)^{-1} u
    def apply_w(self, z):
        if self.diagonal:
            return self.d * z
        return self.r.T @ z @ self.r

    def apply_wt(self, u):
        if self.diagonal:
            return self.d * u
        return self.r @ u @ self.r.T

    def apply_winv_t(self, s):
        if self.diagonal:
            return s / self.d
        return self.rti.T @ s @ self.rti

    def apply_wtw_inv(self, u):
        if self.diagonal:
            return u / (self.d * self.d)
        v = self.rti @ self.rti.T
        return v @ u @ v

    def s(self):
        if self.diagonal:
            return self.d * self.lam
        return (self.r * self.lam) @ self.r.T

    def z(self):
        if self.diagonal:
            return self.lam / self.d
        return (self.rti * self.lam) @ self.rti.T

    def update(self, s_tilde, z_tilde):
        """Move to the point whose scaled coordinates are the given values."""
        if self.diagonal:
            if np.any(s_tilde <= 0) or np.any(z_tilde <= 0):
                raise _NumericalFailure("LP block left the cone")
            self.d = self.d * np.sqrt(s_tilde / z_tilde)
            self.lam = np.sqrt(s_tilde * z_tilde)
            return
        try:
            ls = la.cholesky((s_tilde + s_tilde.T) / 2, lower=True)
            lz = la.cholesky((z_tilde + z_tilde.T) / 2, lower=True)
        except la.LinAlgError:
            raise _NumericalFailure("PSD block left the cone") from None
        u, lam, vt = la.svd(lz.T @ ls)
        if lam[-1] <= 0:
            raise _NumericalFailure("degenerate scaling")
        isq = 1.0 / np.sqrt(lam)
        r_new = (ls @ vt.T) * isq
        rti_new = (lz @ u) * isq
        self.r = self.r @ r_new
        rti = self.rti @ rti_new
        # one Newton-Schulz step keeps r^T rti = I as the products accumulate
        self.rti = 2 * rti - rti @ (self.r.T @ rti)
        self.lam = lam


def _circ(lam, u, diagonal):
    """Jordan product ``lam o u`` with ``lam`` diagonal."""
    if diagonal:
        return lam * u
    return (lam[:, None] * u + u * lam[None, :]) / 2


def _circ_inv(lam, u, diagonal):
    """Solve ``lam o x = u`` for x."""
    if diagonal:
        return u / lam
    return 2 * u / (lam[:, None] + lam[None, :])


def _jordan(a, b, diagonal):
    if diagonal:
        return a * b
    return (a @ b + b @ a) / 2


def _max_step(lam, delta, diagonal) -> float:
    """Largest alpha with ``lam + alpha * delta`` in the cone."""
    if not np.all(np.isfinite(delta)):
        raise _NumericalFailure("non-finite search direction")
    if diagonal:
        t = (delta / lam).min() if delta.size else 0.0
    else:
        isq = 1.0 / np.sqrt(lam)
        m = isq[:, None] * delta * isq[None, :]
        t = la.eigvalsh((m + m.T) / 2)[0] if m.size else 0.0
    return np.inf if t >= 0 else -1.0 / t


def _identity(n, diagonal):
    return np.ones(n) if diagonal else np.eye(n)


def _inner(a, b) -> float:
    return float(np.vdot(a, b))


# -- main solver ---------------------------------------------------------------

class _IPM:
    def __init__(self, p: ConeProblem, tol_gap, tol_feas, max_iter, step_frac,
                 refine=8, verbose=False):
        self.verbose = verbose
        self.p = p
        self.inconsistent = False
        self.tol_gap = tol_gap
        self.tol_feas = tol_feas
        self.max_iter = max_iter
        self.step_frac = step_frac
        self.refine = refine
        self._q = None
        sign = 1.0 if p.task == "min" else -1.0
        self.c = sign * p.objective
        self.blocks = p.blocks
        self.h = [b.const.copy() for b in p.blocks]
        self.F = [b.coeffs.tocsc() for b in p.blocks]
        self.FT = [f.T.tocsr() for f in self.F]
        self.A, self.b = self._independent_rows(p.eq_matrix, -p.eq_const)
        self.AT = self.A.T.tocsr()
        self.m = p.n_vars
        self.nu = sum(b.size for b in p.blocks)
        # per-column nonzeros of PSD blocks, for the Schur complement
        self.columns = []
        for blk, f in zip(self.blocks, self.F):
            cols = []
            if not blk.diagonal:
                n = blk.size
                for j in range(self.m):
                    lo, hi = f.indptr[j], f.indptr[j + 1]
                    rows = f.indices[lo:hi]
                    cols.append((rows // n, rows % n, f.data[lo:hi]))
            self.columns.append(cols)

    # -- setup -----------------------------------------------------------
    def _independent_rows(self, a, b):
        a = sp.csr_matrix(a)
        if a.shape[0] == 0:
            return a, b
        dense = a.toarray()
        q, r, piv = la.qr(dense.T, mode="economic", pivoting=True)
        diag = np.abs(np.diag(r)) if r.size else np.zeros(0)
        tol = max(dense.shape) * np.finfo(float).eps * (diag[0] if diag.size else 0.0)
        rank = int((diag > tol).sum())
        keep = np.sort(piv[:rank])
        drop = np.setdiff1d(np.arange(a.shape[0]), keep)
        if drop.size:
            # dropped rows must be consistent combinations of kept ones
            coef, *_ = la.lstsq(dense[keep].T, dense[drop].T)
            defect = coef.T @ b[keep] - b[drop]
            if np.abs(defect).max() > 1e-9 * max(1.0, np.abs(b).max()):
                self.inconsistent = True
        return sp.csr_matrix(dense[keep]), b[keep]

    # -- linear maps ---------------------------------------------------------
    def G(self, x):
        """``G x`` as a list of block arrays."""
        out = []
        for blk, f in zip(self.blocks, self.F):
            v = -(f @ x)
            out.append(v if blk.diagonal else v.reshape(blk.size, blk.size))
        return out

    def GT(self, zs):
        out = np.zeros(self.m)
        for ft, z in zip(self.FT, zs):
            out -= ft @ z.ravel()
        return out

    # -- KKT -------------------------------------------------------------
    def factor(self, scalings):
        """Factor ``H + A^T A`` with ``H = G^T (W^T W)^{-1} G`` and the
        equality Schur complement ``A (H + A^T A)^{-1} A^T``."""
        self.scalings = scalings
        rows = sum(b.size if b.diagonal else b.size * (b.size + 1) // 2
                   for b in self.blocks) + self.A.shape[0]
        if rows * self.m * self.m <= QR_BUDGET:
            self._factor_qr(scalings)
        else:
            self._factor_schur(scalings)

    def _scaled_columns(self, scalings):
        """Columns of ``W^{-T} G`` in symmetric-vec coordinates."""
        parts = []
        for blk, sc, f, cols in zip(self.blocks, scalings, self.F, self.columns):
            if blk.diagonal:
                parts.append((sp.diags(1.0 / sc.d) @ f).toarray())
                continue
            n = blk.size
            iu = np.triu_indices(n)
            w = np.where(iu[0] == iu[1], 1.0, np.sqrt(2.0))
            out = np.zeros((iu[0].size, self.m))
            rti = sc.rti
            for j in range(self.m):
                r, c, vals = cols[j]
                if r.size == 0:
                    continue
                mat = (rti[r, :].T * vals) @ rti[c, :]
                out[:, j] = mat[iu] * w
            parts.append(out)
        if self.A.shape[0]:
            parts.append(self.A.toarray())
        return np.vstack(parts) if parts else np.zeros((0, self.m))

    def _svec(self, mats) -> np.ndarray:
        """Blocks to symmetric-vec coordinates (off-diagonals times sqrt 2)."""
        parts = []
        for blk, mat in zip(self.blocks, mats):
            if blk.diagonal:
                parts.append(mat)
            else:
                iu, w = self._triu(blk.size)
                parts.append(mat[iu] * w)
        return np.concatenate(parts) if parts else np.zeros(0)

    def _smat(self, vec) -> list:
        out, pos = [], 0
        for blk in self.blocks:
            if blk.diagonal:
                out.append(vec[pos:pos + blk.size])
                pos += blk.size
                continue
            n = blk.size
            iu, w = self._triu(n)
            k = iu[0].size
            mat = np.zeros((n, n))
            mat[iu] = vec[pos:pos + k] / w
            mat = mat + np.triu(mat, 1).T
            out.append(mat)
            pos += k
        return out

    def _triu(self, n):
        cache = self.__dict__.setdefault("_triu_cache", {})
        if n not in cache:
            iu = np.triu_indices(n)
            cache[n] = (iu, np.where(iu[0] == iu[1], 1.0, np.sqrt(2.0)))
        return cache[n]

    def _factor_qr(self, scalings):
        m = self.m
        stacked = self._scaled_columns(scalings)
        n_rows = stacked.shape[0]
        if n_rows < m:
            stacked = np.vstack([stacked, np.zeros((m - n_rows, m))])
        q, r = la.qr(stacked, mode="economic", check_finite=False)
        diag = np.abs(np.diag(r))
        if self.verbose:
            print(f"    qr diag range {diag.min(initial=np.inf):.2e} .. {diag.max(initial=0):.2e}")
        if not np.all(np.isfinite(r)):
            raise _NumericalFailure("non-finite scaling")
        self._q = q
        if diag.min(initial=np.inf) <= 1e-15 * max(1.0, diag.max(initial=0.0)):
            # rank deficient: fall back to a regularized normal-equation solve
            reg = 1e-10 * max(1.0, diag.max(initial=0.0))
            r = la.qr(np.vstack([r, reg * np.eye(m)]), mode="r")[0][:m]
            self._q = None
        self._r = r

        def hsolve(rhs):
            t = la.solve_triangular(r, rhs, trans="T", check_finite=False)
            return la.solve_triangular(r, t, check_finite=False)

        self._hsolve = hsolve
        if self.A.shape[0]:
            c = la.solve_triangular(r, self.A.T.toarray(), trans="T", check_finite=False)
            r2 = la.qr(c, mode="r", check_finite=False)[0][:c.shape[1]]
            if np.abs(np.diag(r2)).min(initial=np.inf) <= 1e-15 * max(1.0, np.abs(r2).max()):
                raise _NumericalFailure("equality Schur complement is singular")
            self._c = c

            def ssolve(rhs):
                t = la.solve_triangular(r2, rhs, trans="T", check_finite=False)
                return la.solve_triangular(r2, t, check_finite=False)

            self._ssolve = ssolve

    def _factor_schur(self, scalings):
        m = self.m
        self._q = None
        H = np.zeros((m, m))
        for blk, sc, ft, cols in zip(self.blocks, scalings, self.FT, self.columns):
            if blk.diagonal:
                w = 1.0 / (sc.d * sc.d)
                H += (ft @ sp.diags(w) @ ft.T).toarray()
                continue
            n = blk.size
            v = sc.rti @ sc.rti.T
            chunk = max(1, min(m, 4_000_000 // max(1, n * n)))
            for start in range(0, m, chunk):
                stop = min(m, start + chunk)
                X = np.zeros((n * n, stop - start))
                for jj, j in enumerate(range(start, stop)):
                    rows, cols_, vals = cols[j]
                    if rows.size == 0:
                        continue
                    X[:, jj] = ((v[:, rows] * vals) @ v[cols_, :]).ravel()
                H[:, start:stop] += ft @ X
        H = (H + H.T) / 2
        if self.A.shape[0]:
            H = H + (self.AT @ self.A).toarray()
        scale = max(1.0, np.abs(np.diag(H)).max()) if m else 1.0
        chol = None
        for reg in (0.0, 1e-14, 1e-12, 1e-10):
            try:
                chol = la.cho_factor(H + reg * scale * np.eye(m), lower=True)
                break
            except la.LinAlgError:
                continue
        if chol is None:
            raise _NumericalFailure("Schur complement is not positive definite")
        self._hsolve = lambda rhs: la.cho_solve(chol, rhs)
        if self.A.shape[0]:
            S = self.A @ la.cho_solve(chol, self.A.T.toarray())
            try:
                schol = la.cho_factor((S + S.T) / 2, lower=True)
            except la.LinAlgError:
                raise _NumericalFailure("equality Schur complement is singular") from None
            self._ssolve = lambda rhs: la.cho_solve(schol, rhs)

    def _solve_once(self, bx, by, bz):
        if self._q is not None:
            return self._solve_scaled(bx, by, bz)
        sc = self.scalings
        rhs = bx + self.GT([s.apply_wtw_inv(z) for s, z in zip(sc, bz)])
        if self.A.shape[0]:
            r1 = rhs + self.AT @ by
            t = self._hsolve(r1)
            uy = self._ssolve(self.A @ t - by)
            ux = self._hsolve(r1 - self.AT @ uy)
        else:
            uy = np.zeros(0)
            ux = self._hsolve(rhs)
        gx = self.G(ux)
        uz = [s.apply_wtw_inv(g - z) for s, g, z in zip(sc, gx, bz)]
        return ux, uy, uz

    def _solve_scaled(self, bx, by, bz):
        """KKT solve in NT-scaled coordinates using the stored QR factors.

        With ``W^{-T} F = Q R`` the block ``W^{-T} b_z`` never meets
        ``(W^T W)^{-1}``, which keeps the solve accurate when the scaling
        is badly conditioned.
        """
        sc = self.scalings
        q, r = self._q, self._r
        t = self._svec([s.apply_winv_t(b) for s, b in zip(sc, bz)])
        n_g = t.size
        rhs = bx + self.AT @ by if self.A.shape[0] else bx
        p = la.solve_triangular(r, rhs, trans="T", check_finite=False) - q[:n_g].T @ t
        if self.A.shape[0]:
            uy = self._ssolve(self._c.T @ p - by)
            p = p - self._c @ uy
        else:
            uy = np.zeros(0)
        ux = la.solve_triangular(r, p, check_finite=False)
        u_scaled = self._smat(-(q[:n_g] @ p) - t)
        uz = []
        for s, u, blk in zip(sc, u_scaled, self.blocks):
            if blk.diagonal:
                uz.append(u / s.d)
            else:
                uz.append(s.rti @ u @ s.rti.T)
        return ux, uy, uz

    def _kkt_apply(self, ux, uy, uz):
        sc = self.scalings
        rx = self.AT @ uy + self.GT(uz) if self.A.shape[0] else self.GT(uz)
        ry = self.A @ ux
        gx = self.G(ux)
        rz = [g - s.apply_wt(s.apply_w(z)) for s, g, z in zip(sc, gx, uz)]
        return rx, ry, rz

    def _kkt_error(self, u, rhs):
        """Residual of ``K u = rhs`` and the size of the terms it cancels."""
        ux, uy, uz = u
        bx, by, bz = rhs
        sc = self.scalings
        gtz = self.GT(uz)
        aty = self.AT @ uy if self.A.shape[0] else np.zeros_like(gtz)
        ax = self.A @ ux
        gx = self.G(ux)
        wz = [s.apply_wt(s.apply_w(z)) for s, z in zip(sc, uz)]
        err = max(np.abs(aty + gtz - bx).max(initial=0), np.abs(ax - by).max(initial=0),
                  max((np.abs(g - w - b).max() for g, w, b in zip(gx, wz, bz)), default=0.0))
        size = max(np.abs(gtz).max(initial=0), np.abs(aty).max(initial=0),
                   np.abs(ax).max(initial=0), np.abs(bx).max(initial=0),
                   np.abs(by).max(initial=0),
                   max((max(np.abs(g).max(), np.abs(w).max(), np.abs(b).max())
                        for g, w, b in zip(gx, wz, bz)), default=0.0))
        return err, size

    def solve_kkt(self, bx, by, bz):
        """Solve the scaled KKT system with adaptive iterative refinement.

        Refinement stops once the residual stops shrinking.  A solve whose
        backward error stays above ``KKT_ACCURACY`` raises
        ``_NumericalFailure``.
        """
        rhs = (bx, by, bz)
        u = self._solve_once(bx, by, bz)
        err, size = self._kkt_error(u, rhs)
        for _ in range(self.refine):
            if err == 0.0:
                break
            rx, ry, rz = self._kkt_apply(*u)
            e = self._solve_once(bx - rx, by - ry, [b - r for b, r in zip(bz, rz)])
            cand = (u[0] + e[0], u[1] + e[1], [a + b for a, b in zip(u[2], e[2])])
            cerr, csize = self._kkt_error(cand, rhs)
            if not cerr < err:
                break
            improved = cerr < 0.9 * err
            u, err, size = cand, cerr, csize
            if not improved:
                break
        if self.verbose:
            print(f"    kkt residual {err:.2e} (terms {size:.1e})")
        if not err <= KKT_ACCURACY * max(size, 1e-300):
            raise _NumericalFailure(f"KKT solve lost accuracy (residual {err:.1e})")
        return u

    def _direct_infeasibility(self, y, resy0, resz0) -> float:
        """Scaled violation of the cone and equality constraints at ``y``."""
        worst = 0.0
        for blk in self.blocks:
            worst = max(worst, -blk.min_eig(y))
        if self.A.shape[0]:
            worst = max(worst, np.linalg.norm(self.A @ y - self.b) * resz0 / resy0)
        return worst / resz0

    # -- iteration -------------------------------------------------------
    def run(self) -> Solution:
        p = self.p
        m = self.m
        blocks = self.blocks
        scal = [_Scaling(b.size, b.diagonal) for b in blocks]
        s = [_identity(b.size, b.diagonal) for b in blocks]
        z = [_identity(b.size, b.diagonal) for b in blocks]
        x = np.zeros(m)
        y = np.zeros(self.A.shape[0])
        tau = kappa = 1.0
        c, b, h = self.c, self.b, self.h
        resx0 = max(1.0, np.linalg.norm(c))
        resy0 = max(1.0, np.linalg.norm(b))
        resz0 = max(1.0, np.sqrt(sum(_inner(hh, hh) for hh in h)))
        status = "max_iter"
        info = {}
        it = 0
        best = None
        since_best = 0
        for it in range(self.max_iter + 1):
            gap = sum(_inner(si, zi) for si, zi in zip(s, z))
            mu = (gap + tau * kappa) / (self.nu + 1)
            gx = self.G(x)
            gtz = self.GT(z)
            aty = self.AT @ y if y.size else np.zeros(m)
            rx = aty + gtz + c * tau
            ry = -(self.A @ x) + b * tau if y.size else np.zeros(0)
            rz = [si + g - hh * tau for si, g, hh in zip(s, gx, h)]
            cx = float(c @ x)
            by_hz = float(b @ y) + sum(_inner(hh, zi) for hh, zi in zip(h, z))
            rt = kappa + cx + by_hz
            pcost = cx / tau
            dcost = -by_hz / tau
            pres = max(np.linalg.norm(ry) / tau / resy0 if y.size else 0.0,
                       np.sqrt(sum(_inner(r, r) for r in rz)) / tau / resz0)
            dres = np.linalg.norm(rx) / tau / resx0
            abs_gap = gap / tau ** 2
            rel_gap = abs_gap / max(1.0, abs(pcost), abs(dcost))
            # infeasibility certificates
            pinf = dinf = np.inf
            if by_hz < 0:
                pinf = np.linalg.norm(aty + gtz) / resx0 / (-by_hz)
            if cx < 0:
                ax = np.linalg.norm(self.A @ x) / resy0 if y.size else 0.0
                gxs = np.sqrt(sum(_inner(g + si, g + si) for g, si in zip(gx, s))) / resz0
                dinf = max(ax, gxs) / (-cx)
            info = dict(pres=pres, dres=dres, gap=abs_gap, rel_gap=rel_gap,
                        pcost=pcost, dcost=dcost)
            merit = max(pres / self.tol_feas, dres / self.tol_feas,
                        min(rel_gap, abs_gap) / self.tol_gap)
            if best is None or merit < best[0]:
                best = (merit, x.copy(), y.copy(), [zi.copy() for zi in z], tau, dict(info))
                since_best = 0
            else:
                since_best += 1
            if self.verbose:
                print(f"{it:3d} pcost {pcost: .8e} dcost {dcost: .8e} gap {abs_gap:.2e} "
                      f"pres {pres:.2e} dres {dres:.2e} tau {tau:.2e} kappa {kappa:.2e}")
            gap_ok = rel_gap <= self.tol_gap or abs_gap <= self.tol_gap
            if pres > self.tol_feas and dres <= self.tol_feas and gap_ok:
                # the tracked slack drifts when the scaling is badly conditioned;
                # judge the moment vector itself instead
                direct = self._direct_infeasibility(x / tau, resy0, resz0)
                if direct <= self.tol_feas:
                    pres = info["pres"] = direct
            if pres <= self.tol_feas and dres <= self.tol_feas and gap_ok:
                status = "optimal"
                break
            if pinf <= self.tol_feas:
                status = "primal_infeasible"
                break
            if dinf <= self.tol_feas:
                status = "dual_infeasible"
                break
            if it == self.max_iter:
                break
            if since_best >= STALL_ITERS:
                status = "numerical_failure"
                info["message"] = "no progress; returning the best iterate"
                if tau < 1e-4 and abs(pcost) > 1e2:
                    # cost runs off while tau -> 0 without an improving ray
                    info["message"] += " (objective appears unbounded, no certificate)"
                break
            try:
                self.factor(scal)
                # Delta = u2 + dtau * u1
                x1, y1, z1 = self.solve_kkt(-c, b, h)
                denom_base = float(c @ x1 + b @ y1) + sum(
                    _inner(hh, zz) for hh, zz in zip(h, z1))
                lam = [sc.lam for sc in scal]
                lamsq = [l * l if blk.diagonal else np.diag(l * l)
                         for l, blk in zip(lam, blocks)]
                e = [_identity(blk.size, blk.diagonal) for blk in blocks]
                aff = None
                sigma, eta = 0.0, 1.0
                for phase in ("predictor", "corrector"):
                    if phase == "predictor":
                        rc = [-q for q in lamsq]
                        rk = -tau * kappa
                    else:
                        ds_a, dz_a, dtau_a, dkap_a = aff
                        rc = [-q + sigma * mu * ee - _jordan(a1, a2, blk.diagonal)
                              for q, ee, a1, a2, blk in zip(lamsq, e, ds_a, dz_a, blocks)]
                        rk = -tau * kappa + sigma * mu - dtau_a * dkap_a
                    ds = [_circ_inv(l, r, blk.diagonal) for l, r, blk in zip(lam, rc, blocks)]
                    bx = -eta * rx
                    by = eta * ry
                    bz = [-eta * r - sc.apply_wt(d) for r, sc, d in zip(rz, scal, ds)]
                    x2, y2, z2 = self.solve_kkt(bx, by, bz)
                    num = eta * rt + rk / tau + float(c @ x2 + b @ y2) + sum(
                        _inner(hh, zz) for hh, zz in zip(h, z2))
                    dtau = num / (kappa / tau - denom_base)
                    dx = x2 + dtau * x1
                    dy = y2 + dtau * y1
                    dz = [a + dtau * a1 for a, a1 in zip(z2, z1)]
                    dzt = [sc.apply_w(d) for sc, d in zip(scal, dz)]
                    dst = [d - w for d, w in zip(ds, dzt)]
                    dkap = (rk - kappa * dtau) / tau
                    amax = np.inf
                    for l, a1, a2, blk in zip(lam, dst, dzt, blocks):
                        amax = min(amax, _max_step(l, a1, blk.diagonal),
                                   _max_step(l, a2, blk.diagonal))
                    if dtau < 0:
                        amax = min(amax, -tau / dtau)
                    if dkap < 0:
                        amax = min(amax, -kappa / dkap)
                    if phase == "predictor":
                        alpha_aff = min(1.0, amax)
                        sigma = (1.0 - alpha_aff) ** 3
                        eta = 1.0 - sigma
                        aff = (dst, dzt, dtau, dkap)
                alpha = min(1.0, self.step_frac * amax)
                s = [si + alpha * sc.apply_wt(a1) for si, sc, a1 in zip(s, scal, dst)]
                for sc, l, a1, a2, blk in zip(scal, lam, dst, dzt, blocks):
                    base = l if blk.diagonal else np.diag(l)
                    sc.update(base + alpha * a1, base + alpha * a2)
                z = [zi + alpha * d for zi, d in zip(z, dz)]
                x = x + alpha * dx
                y = y + alpha * dy
                tau = tau + alpha * dtau
                kappa = kappa + alpha * dkap
                if not (np.isfinite(tau) and tau > 0 and kappa > 0):
                    raise _NumericalFailure("homogenizing variables left the cone")
            except _NumericalFailure as exc:
                status = "numerical_failure"
                info["message"] = str(exc)
                break
        if status in ("max_iter", "numerical_failure") and best is not None:
            message = info.get("message", "")
            _, x, y, z, tau, info = best
            if message:
                info["message"] = message
        if status in ("primal_infeasible", "dual_infeasible"):
            yv = x.copy()
        else:
            yv = x / tau
        sign = 1.0 if p.task == "min" else -1.0
        objective = p.value(yv)
        dual_obj = sign * info.get("dcost", np.nan) + p.constant
        residuals = {k: float(v) for k, v in info.items()
                     if k not in ("pcost", "dcost", "message")}
        return Solution(y=yv, status=status, objective=float(objective),
                        dual_objective=float(dual_obj), residuals=residuals,
                        iterations=it, dual_blocks=[zi / tau for zi in z],
                        eq_multipliers=y / tau, message=info.get("message", ""))


def check_size(p: ConeProblem, max_block: int = MAX_BLOCK,
               max_entries: int = MAX_ENTRIES) -> None:
    biggest = max((b.size for b in p.blocks if not b.diagonal), default=0)
    entries = sum(b.upper_entries for b in p.blocks)
    if biggest > max_block or entries > max_entries:
        raise ProblemTooLarge(
            f"problem has a block of size {biggest} and {entries} upper-triangular "
            f"entries (limits {max_block} / {max_entries}); export it with "
            "export_sdpa and use an external solver")


def _trivial(p: ConeProblem) -> Solution:
    y = np.zeros(0)
    eig = min((b.min_eig(y) for b in p.blocks), default=0.0)
    eq = float(np.abs(p.eq_const).max()) if p.n_eq else 0.0
    ok = eig >= -1e-12 and eq <= 1e-12
    return Solution(y=y, status="optimal" if ok else "primal_infeasible",
                    objective=p.constant, dual_objective=p.constant,
                    residuals=dict(pres=0.0, dres=0.0, gap=0.0, rel_gap=0.0,
                                   min_eig=float(eig), eq_residual=eq))


def solve(p: ConeProblem, tol_gap: float = 1e-8, tol_feas: float = 1e-8,
          max_iter: int = 200, step_frac: float = 0.98,
          check_guardrail: bool = True, verbose: bool = False) -> Solution:
    """Solve a :class:`ConeProblem`.

    Parameters
    ----------
    p : ConeProblem
    tol_gap, tol_feas : float
        Relative duality gap and relative residual tolerances.
    max_iter : int
    step_frac : float
        Fraction of the distance to the cone boundary taken per step.

    Returns
    -------
    Solution
        ``status`` is one of ``optimal``, ``primal_infeasible``,
        ``dual_infeasible``, ``max_iter`` or ``numerical_failure``.

    Raises
    ------
    ProblemTooLarge
        If a block exceeds the in-process size guardrail.
    """
    if check_guardrail:
        check_size(p)
    if p.n_vars == 0:
        return _trivial(p)
    ipm = _IPM(p, tol_gap, tol_feas, max_iter, step_frac, verbose=verbose)
    if getattr(ipm, "inconsistent", False):
        return Solution(y=np.zeros(p.n_vars), status="primal_infeasible",
                        objective=float("nan"),
                        message="equality constraints are inconsistent")
    return _with_point_residuals(p, ipm.run())


def _with_point_residuals(p: ConeProblem, sol: Solution) -> Solution:
    """Attach the smallest block eigenvalue and equality residual at ``y``."""
    y = np.asarray(sol.y, dtype=float)
    if sol.status == "optimal" and np.all(np.isfinite(y)):
        eigs = [b.min_eig(y) for b in p.blocks]
        sol.residuals["min_eig"] = float(min(eigs)) if eigs else 0.0
        sol.residuals["eq_residual"] = (float(np.abs(p.eq_matrix @ y + p.eq_const).max())
                                        if p.n_eq else 0.0)
    return sol
