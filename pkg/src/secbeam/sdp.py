"""Small dense semidefinite programs.

Problems are stated over real symmetric PSD blocks plus optional nonnegative
scalars, with linear constraints of sense ``<=``, ``>=`` or ``=``::

    minimize    sum_k <C_k, X_k> + c_lin . x
    subject to  sum_k <A_ik, X_k> + a_i . x  (sense_i)  rhs_i
                X_k PSD, x >= 0

Internally the problem is rewritten as a cone LP in inequality form and solved
by a primal-dual interior point method on the homogeneous self-dual embedding
with Nesterov-Todd scaling and a Mehrotra predictor-corrector. The embedding
yields Farkas certificates when the problem is infeasible or unbounded.
"""
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Optional

import numpy as np
import scipy.linalg as sla

from .errors import InvalidInput
from .numerics import as_hermitian, real_embed, real_unembed

OPTIMAL = "Optimal"
INFEASIBLE = "Infeasible"
UNBOUNDED = "Unbounded"
NUMERICAL_FAILURE = "NumericalFailure"

SENSES = ("<=", ">=", "=")
MAX_TOTAL_PSD_DIM = 128
MAX_CONSTRAINTS = 5000


@dataclass
class Constraint:
    """One linear constraint; ``blocks`` maps block index to a coefficient matrix."""

    blocks: dict
    sense: str
    rhs: float
    linear: dict = field(default_factory=dict)


@dataclass
class SdpProblem:
    block_dims: list
    objective: list
    constraints: list = field(default_factory=list)
    n_linear: int = 0
    linear_objective: Optional[np.ndarray] = None

    def validate(self):
        dims = list(self.block_dims)
        if any(int(d) < 1 for d in dims):
            raise InvalidInput("block dimensions must be positive")
        if sum(dims) > MAX_TOTAL_PSD_DIM:
            raise InvalidInput(f"total PSD dimension exceeds {MAX_TOTAL_PSD_DIM}")
        if len(self.constraints) > MAX_CONSTRAINTS:
            raise InvalidInput(f"more than {MAX_CONSTRAINTS} constraints")
        if len(self.objective) != len(dims):
            raise InvalidInput("objective needs one matrix (or None) per block")
        for k, c in enumerate(self.objective):
            if c is not None:
                _check_sym(c, dims[k], f"objective block {k}")
        if self.linear_objective is not None:
            lo = np.asarray(self.linear_objective, dtype=float)
            if lo.shape != (self.n_linear,) or not np.all(np.isfinite(lo)):
                raise InvalidInput("linear objective has wrong shape or non-finite entries")
        for i, con in enumerate(self.constraints):
            if con.sense not in SENSES:
                raise InvalidInput(f"constraint {i}: unknown sense {con.sense!r}")
            if not np.isfinite(con.rhs):
                raise InvalidInput(f"constraint {i}: non-finite rhs")
            for k, a in con.blocks.items():
                if not 0 <= k < len(dims):
                    raise InvalidInput(f"constraint {i}: no block {k}")
                _check_sym(a, dims[k], f"constraint {i} block {k}")
            for j, v in con.linear.items():
                if not 0 <= j < self.n_linear or not np.isfinite(v):
                    raise InvalidInput(f"constraint {i}: bad linear coefficient {j}")


@dataclass
class SdpSolution:
    status: str
    blocks: list
    linear: np.ndarray
    duals: np.ndarray
    dual_blocks: list
    dual_linear: np.ndarray
    objective: float
    dual_objective: float
    residuals: dict
    iterations: int
    certificate: Optional[dict] = None


@dataclass
class SolverOptions:
    max_iters: int = 500
    feastol: float = 1e-8
    dual_feastol: float = 1e-7
    reltol: float = 1e-7
    infeas_tol: float = 1e-7
    tau_kappa_tol: float = 1e-8
    step: float = 0.98
    refinement: int = 2


def _check_sym(a, d, what):
    a = np.asarray(a, dtype=float)
    if a.shape != (d, d):
        raise InvalidInput(f"{what}: expected shape {(d, d)}, got {a.shape}")
    if not np.all(np.isfinite(a)):
        raise InvalidInput(f"{what}: non-finite entries")
    if not np.allclose(a, a.T, rtol=0, atol=1e-12 * max(1.0, np.abs(a).max())):
        raise InvalidInput(f"{what}: not symmetric")


# -- svec: isometry between symmetric matrices and R^{d(d+1)/2} -------------

@lru_cache(maxsize=None)
def _svec_index(d):
    iu = np.triu_indices(d)
    scale = np.where(iu[0] == iu[1], 1.0, np.sqrt(2.0))
    return iu, scale


def svec(a):
    """Scaled upper triangle; <A, B> = svec(A) . svec(B). Batched over leading axes."""
    a = np.asarray(a, dtype=float)
    iu, scale = _svec_index(a.shape[-1])
    return a[..., iu[0], iu[1]] * scale


def smat(v, d):
    v = np.asarray(v, dtype=float)
    iu, scale = _svec_index(d)
    out = np.zeros(v.shape[:-1] + (d, d))
    out[..., iu[0], iu[1]] = v / scale
    out[..., iu[1], iu[0]] = v / scale
    return out


# -- internal cone LP ---------------------------------------------------------

class _ConeLP:
    """min c'x  s.t.  Gx + s = h, Ax = b, s in (R+^n_o x S+^d1 x ...).

    x = [svec(X_1), ..., svec(X_k), x_lin]; cone order is
    [inequality slacks, x_lin, svec(X_1), ...]. Cone rows for the variables
    themselves carry G = -I, so G is stored only through its dense
    inequality part.
    """

    def __init__(self, prob):
        dims = [int(d) for d in prob.block_dims]
        self.dims = dims
        self.nv = [d * (d + 1) // 2 for d in dims]
        self.voff = np.concatenate([[0], np.cumsum(self.nv)]).astype(int)
        self.nb = int(self.voff[-1])
        self.nl = int(prob.n_linear)
        self.n = self.nb + self.nl

        c = np.zeros(self.n)
        for k, ck in enumerate(prob.objective):
            if ck is not None:
                c[self.voff[k]:self.voff[k + 1]] = svec(ck)
        if prob.linear_objective is not None:
            c[self.nb:] = prob.linear_objective
        self.c = c

        ineq_rows, ineq_rhs, ineq_idx, ineq_sign = [], [], [], []
        eq_rows, eq_rhs, eq_idx = [], [], []
        for i, con in enumerate(prob.constraints):
            row = np.zeros(self.n)
            for k, a in con.blocks.items():
                row[self.voff[k]:self.voff[k + 1]] += svec(a)
            for j, v in con.linear.items():
                row[self.nb + j] += v
            if con.sense == "=":
                eq_rows.append(row)
                eq_rhs.append(con.rhs)
                eq_idx.append(i)
            else:
                sign = 1.0 if con.sense == "<=" else -1.0
                ineq_rows.append(sign * row)
                ineq_rhs.append(sign * con.rhs)
                ineq_idx.append(i)
                ineq_sign.append(sign)
        self.Gi = np.array(ineq_rows).reshape(len(ineq_rows), self.n)
        self.hi = np.array(ineq_rhs, dtype=float)
        A = np.array(eq_rows).reshape(len(eq_rows), self.n)
        b = np.array(eq_rhs, dtype=float)
        eq_idx = np.array(eq_idx, dtype=int)
        self.eq_conflict = None
        keep = self._independent_rows(A, b, eq_idx)
        self.A, self.b, self.eq_idx = A[keep], b[keep], eq_idx[keep]
        self.ineq_idx = np.array(ineq_idx, dtype=int)
        self.ineq_sign = np.array(ineq_sign)
        self.ni = self.Gi.shape[0]
        self.ne = self.A.shape[0]
        self.no = self.ni + self.nl
        self.coff = self.no + self.voff
        self.ncone = self.no + self.nb
        self.h = np.concatenate([self.hi, np.zeros(self.nl + self.nb)])
        self.degree = self.no + sum(dims)

    def _independent_rows(self, A, b, idx):
        """Indices of a maximal independent subset of equality rows.

        Dependent rows that agree with the kept ones are dropped; a dependent
        row with a conflicting right-hand side is recorded in ``eq_conflict``
        as a vector y over the original rows with A'y = 0 and b'y != 0.
        """
        ne = A.shape[0]
        if ne == 0:
            return np.arange(0)
        _, R, piv = sla.qr(A.T, mode="economic", pivoting=True)
        d = np.abs(np.diag(R))
        rank = int(np.sum(d > 1e-10 * max(d[0], 1e-300))) if d.size else 0
        keep = np.sort(piv[:rank])
        drop = np.sort(piv[rank:])
        if drop.size:
            coef, *_ = np.linalg.lstsq(A[keep].T, A[drop].T, rcond=None)
            mismatch = b[drop] - coef.T @ b[keep]
            scale = 1.0 + np.abs(b[drop]) + np.abs(coef.T) @ np.abs(b[keep])
            j = int(np.argmax(np.abs(mismatch) / scale))
            if abs(mismatch[j]) > 1e-9 * scale[j]:
                y = np.zeros(ne)
                y[drop[j]] = 1.0
                y[keep] = -coef[:, j]
                y = y / mismatch[j]
                self.eq_conflict = dict(zip(idx.tolist(), y.tolist()))
        return keep

    # linear maps
    def G(self, x):
        return np.concatenate([self.Gi @ x, -x[self.nb:], -x[:self.nb]])

    def GT(self, z):
        out = self.Gi.T @ z[:self.ni]
        out[self.nb:] -= z[self.ni:self.no]
        out[:self.nb] -= z[self.no:]
        return out

    def blocks_of(self, u):
        return [u[self.coff[k]:self.coff[k + 1]] for k in range(len(self.dims))]

    # cone algebra
    def identity(self):
        e = np.zeros(self.ncone)
        e[:self.no] = 1.0
        for k, d in enumerate(self.dims):
            e[self.coff[k]:self.coff[k + 1]] = svec(np.eye(d))
        return e

    def min_eig(self, u):
        vals = [np.min(u[:self.no])] if self.no else []
        for k, d in enumerate(self.dims):
            vals.append(np.linalg.eigvalsh(smat(u[self.coff[k]:self.coff[k + 1]], d))[0])
        return min(vals)

    def prod(self, u, v):
        out = np.empty(self.ncone)
        out[:self.no] = u[:self.no] * v[:self.no]
        for k, d in enumerate(self.dims):
            sl = slice(self.coff[k], self.coff[k + 1])
            U, V = smat(u[sl], d), smat(v[sl], d)
            out[sl] = svec(0.5 * (U @ V + V @ U))
        return out


class _Scaling:
    """Nesterov-Todd scaling point W with W z = W^{-T} s = lambda."""

    def __init__(self, lp, s, z):
        self.lp = lp
        no = lp.no
        self.wo = np.sqrt(s[:no] / z[:no])
        lam_o = np.sqrt(s[:no] * z[:no])
        self.R, self.Rinv, self.lam_b = [], [], []
        for k, d in enumerate(lp.dims):
            sl = slice(lp.coff[k], lp.coff[k + 1])
            Ls = np.linalg.cholesky(smat(s[sl], d))
            Lz = np.linalg.cholesky(smat(z[sl], d))
            U, lam, Vt = np.linalg.svd(Lz.T @ Ls)
            R = Ls @ Vt.T / np.sqrt(lam)
            self.R.append(R)
            self.Rinv.append(np.linalg.solve(R, np.eye(d)))
            self.lam_b.append(lam)
        self.lam_o = lam_o

    def _blockwise(self, u, fo, fb):
        lp = self.lp
        out = np.empty(lp.ncone)
        out[:lp.no] = fo(u[:lp.no])
        for k, d in enumerate(lp.dims):
            sl = slice(lp.coff[k], lp.coff[k + 1])
            out[sl] = svec(fb(k, smat(u[sl], d)))
        return out

    def W(self, u):
        return self._blockwise(u, lambda v: v * self.wo,
                               lambda k, U: self.R[k].T @ U @ self.R[k])

    def WT(self, u):
        return self._blockwise(u, lambda v: v * self.wo,
                               lambda k, U: self.R[k] @ U @ self.R[k].T)

    def WinvT(self, u):
        return self._blockwise(u, lambda v: v / self.wo,
                               lambda k, U: self.Rinv[k] @ U @ self.Rinv[k].T)

    def lam(self):
        lp = self.lp
        out = np.empty(lp.ncone)
        out[:lp.no] = self.lam_o
        for k in range(len(lp.dims)):
            out[lp.coff[k]:lp.coff[k + 1]] = svec(np.diag(self.lam_b[k]))
        return out

    def lam_div(self, u):
        """Solve lambda o X = u for X."""
        lp = self.lp
        out = np.empty(lp.ncone)
        out[:lp.no] = u[:lp.no] / self.lam_o
        for k, d in enumerate(lp.dims):
            sl = slice(lp.coff[k], lp.coff[k + 1])
            lam = self.lam_b[k]
            out[sl] = svec(2.0 * smat(u[sl], d) / (lam[:, None] + lam[None, :]))
        return out

    def max_step(self, du):
        """Largest alpha with lambda + alpha * du in the cone (inf if unbounded)."""
        lp = self.lp
        rho = 0.0
        if lp.no:
            rho = min(rho, np.min(du[:lp.no] / self.lam_o))
        for k, d in enumerate(lp.dims):
            sl = slice(lp.coff[k], lp.coff[k + 1])
            isq = 1.0 / np.sqrt(self.lam_b[k])
            M = isq[:, None] * smat(du[sl], d) * isq[None, :]
            rho = min(rho, np.linalg.eigvalsh(M)[0])
        return np.inf if rho >= 0 else -1.0 / rho

    def Winv(self, u):
        return self._blockwise(u, lambda v: v / self.wo,
                               lambda k, U: self.Rinv[k].T @ U @ self.Rinv[k])

    def scaled_identity_blocks(self):
        """Matrix of W^{-T} on each PSD block in svec coordinates."""
        mats = []
        for k, d in enumerate(self.lp.dims):
            basis = smat(np.eye(self.lp.nv[k]), d)
            mats.append(svec(self.Rinv[k] @ basis @ self.Rinv[k].T).T)
        return mats


class _KKT:
    """Solver for the scaled Newton system

        [0   A'  Gs'] [x ]   [r1]
        [A   0   0  ] [y ] = [r2]
        [Gs  0   -I ] [zs]   [r3]

    with Gs = W^{-T} G and zs = W z. Uses a QR factorization of Gs instead of
    the normal equations, which would square its condition number.
    """

    def __init__(self, lp, scal, refinement):
        self.lp, self.scal, self.refinement = lp, scal, refinement
        Gs = np.empty((lp.ncone, lp.n))
        Gs[:lp.ni] = lp.Gi / scal.wo[:lp.ni, None]
        Gs[lp.ni:] = 0.0
        Gs[lp.ni + np.arange(lp.nl), lp.nb + np.arange(lp.nl)] = -1.0 / scal.wo[lp.ni:]
        for k, M in enumerate(scal.scaled_identity_blocks()):
            Gs[lp.coff[k]:lp.coff[k + 1], lp.voff[k]:lp.voff[k + 1]] = -M
        self.Gs = Gs
        self.Q, self.R = np.linalg.qr(Gs)
        if lp.ne:
            self.Ahat = sla.solve_triangular(self.R, lp.A.T, trans="T").T
            self.chol_a = sla.cho_factor(self.Ahat @ self.Ahat.T)

    def _apply(self, x, y, zs):
        lp = self.lp
        return lp.A.T @ y + self.Gs.T @ zs, lp.A @ x, self.Gs @ x - zs

    def _solve_once(self, r1, r2, r3):
        v = sla.solve_triangular(self.R, r1, trans="T") + self.Q.T @ r3
        y = np.zeros(self.lp.ne)
        if self.lp.ne:
            y = sla.cho_solve(self.chol_a, self.Ahat @ v - r2)
            v = v - self.Ahat.T @ y
        x = sla.solve_triangular(self.R, v)
        return x, y, self.Gs @ x - r3

    def solve(self, r1, r2, r3):
        x, y, zs = self._solve_once(r1, r2, r3)
        for _ in range(self.refinement):
            e1, e2, e3 = self._apply(x, y, zs)
            dx, dy, dzs = self._solve_once(r1 - e1, r2 - e2, r3 - e3)
            x, y, zs = x + dx, y + dy, zs + dzs
        return x, y, zs


def _shift_into_cone(lp, u):
    a = -lp.min_eig(u)
    if a < 0:
        return u
    return u + (1.0 + a) * lp.identity()


def _inf(v):
    return float(np.max(np.abs(v))) if v.size else 0.0


def solve(prob: SdpProblem, options: Optional[SolverOptions] = None) -> SdpSolution:
    """Solve ``prob``; see :class:`SdpSolution` for the reported fields."""
    opts = options or SolverOptions()
    prob.validate()
    lp = _ConeLP(prob)
    c, h, b = lp.c, lp.h, lp.b

    if lp.eq_conflict is not None:
        return _conflicting_equalities(prob, lp)

    # starting point: least-squares primal/dual points pushed into the cone
    try:
        kkt0 = _KKT(lp, _Scaling(lp, lp.identity(), lp.identity()), opts.refinement)
    except (np.linalg.LinAlgError, ValueError):
        return _package(prob, lp, NUMERICAL_FAILURE, np.zeros(lp.n), np.zeros(lp.ne),
                        lp.identity(), lp.identity(), 1.0, 1.0, {}, 0)
    x, _, zt = kkt0.solve(np.zeros(lp.n), b, h)
    s = _shift_into_cone(lp, -zt)
    _, y, z = kkt0.solve(-c, np.zeros(lp.ne), np.zeros(lp.ncone))
    z = _shift_into_cone(lp, z)
    tau, kappa = 1.0, 1.0

    cnorm = max(1.0, _inf(c))
    status = NUMERICAL_FAILURE
    info = {}
    it = 0
    for it in range(opts.max_iters + 1):
        rx = lp.A.T @ y + lp.GT(z) + c * tau
        ry = b * tau - lp.A @ x
        rz = s + lp.G(x) - h * tau
        rt = kappa + c @ x + b @ y + h @ z
        sz = s @ z
        mu = (sz + tau * kappa) / (lp.degree + 1)

        pcost = c @ x / tau
        dcost = -(b @ y + h @ z) / tau
        pres = max(_inf(ry), _inf(rz)) / tau
        dres = _inf(rx) / tau / cnorm
        gap = sz / tau ** 2
        rel_gap = gap / max(1.0, abs(pcost))
        cost_gap = abs(pcost - dcost) / max(1.0, abs(pcost))
        info = dict(primal=pres, dual=dres, gap=gap, rel_gap=rel_gap,
                    cost_gap=cost_gap, tau=tau, kappa=kappa, mu=mu)
        if not all(np.isfinite(v) for v in info.values()):
            status = NUMERICAL_FAILURE
            break

        if pres <= opts.feastol and dres <= opts.dual_feastol and \
                rel_gap <= opts.reltol and cost_gap <= opts.reltol:
            status = OPTIMAL
            break
        hzby = h @ z + b @ y
        if hzby < 0:
            ray = _inf(lp.A.T @ y + lp.GT(z)) / (-hzby)
            info["infeasibility_ray"] = ray
            if ray <= opts.infeas_tol and tau / kappa <= opts.tau_kappa_tol:
                status = INFEASIBLE
                break
        cx = c @ x
        if cx < 0:
            ray = max(_inf(lp.A @ x), _inf(lp.G(x) + s)) / (-cx)
            info["unboundedness_ray"] = ray
            if ray <= opts.infeas_tol and tau / kappa <= opts.tau_kappa_tol:
                status = UNBOUNDED
                break
        if it == opts.max_iters:
            break

        try:
            scal = _Scaling(lp, s, z)
            kkt = _KKT(lp, scal, opts.refinement)
        except (np.linalg.LinAlgError, ValueError):
            break
        lam = scal.lam()
        e = lp.identity()
        hs = scal.WinvT(h)
        x1, y1, zs1 = kkt.solve(-c, b, hs)
        denom = c @ x1 + b @ y1 + hs @ zs1 - kappa / tau

        def direction(sig, ds, dk):
            f = 1.0 - sig
            x2, y2, zs2 = kkt.solve(-f * rx, f * ry, scal.WinvT(-f * rz) - scal.lam_div(ds))
            dtau = (-f * rt - dk / tau - c @ x2 - b @ y2 - hs @ zs2) / denom
            dx, dy, dz_sc = x2 + dtau * x1, y2 + dtau * y1, zs2 + dtau * zs1
            ds_sc = scal.lam_div(ds) - dz_sc
            dkap = (dk - kappa * dtau) / tau
            amax = min(scal.max_step(ds_sc), scal.max_step(dz_sc))
            if dtau < 0:
                amax = min(amax, -tau / dtau)
            if dkap < 0:
                amax = min(amax, -kappa / dkap)
            return dx, dy, dz_sc, ds_sc, dtau, dkap, amax

        lam2 = lp.prod(lam, lam)
        _, _, dz_a, ds_a, dtau_a, dkap_a, amax_a = direction(0.0, -lam2, -tau * kappa)
        sigma = (1.0 - min(1.0, amax_a)) ** 3
        ds = -lam2 - lp.prod(ds_a, dz_a) + sigma * mu * e
        dk = -tau * kappa - dtau_a * dkap_a + sigma * mu
        dx, dy, dz_sc, ds_sc, dtau, dkap, amax = direction(sigma, ds, dk)
        alpha = min(1.0, opts.step * amax)

        x = x + alpha * dx
        y = y + alpha * dy
        z = z + alpha * scal.Winv(dz_sc)
        s = s + alpha * scal.WT(ds_sc)
        tau = tau + alpha * dtau
        kappa = kappa + alpha * dkap
        # keep the pair strictly inside the cone after round-off
        if lp.min_eig(s) <= 0 or lp.min_eig(z) <= 0 or tau <= 0 or kappa <= 0:
            break

        # renormalize the homogeneous iterate
        scale = 1.0 / max(tau, kappa)
        if scale < 1e-6 or scale > 1e6:
            x, y, z, s = x * scale, y * scale, z * scale, s * scale
            tau, kappa = tau * scale, kappa * scale

    return _package(prob, lp, status, x, y, z, s, tau, kappa, info, it)


def _conflicting_equalities(prob, lp):
    # equalities alone are inconsistent: y with A'y = 0, b'y = 1 is a Farkas ray
    mult = np.zeros(len(prob.constraints))
    for i, v in lp.eq_conflict.items():
        mult[i] = v
    zero_blocks = [np.zeros((d, d)) for d in lp.dims]
    cert = dict(multipliers=mult, residual=0.0, tau_over_kappa=0.0, dual_blocks=zero_blocks,
                reason="inconsistent equality constraints")
    nan = float("nan")
    return SdpSolution(INFEASIBLE, zero_blocks, np.zeros(lp.nl), mult, zero_blocks,
                       np.zeros(lp.nl), nan, nan, {"infeasibility_ray": 0.0}, 0, cert)


def _package(prob, lp, status, x, y, z, s, tau, kappa, info, it):
    ncon = len(prob.constraints)
    mult = np.zeros(ncon)
    certificate = None
    if status == INFEASIBLE:
        norm = -(lp.h @ z + lp.b @ y)
        xs, ys, zs = x / tau, y / norm, z / norm
        certificate = dict(multipliers=None, residual=info.get("infeasibility_ray"),
                           tau_over_kappa=tau / kappa)
    elif status == UNBOUNDED:
        norm = -(lp.c @ x)
        xs, ys, zs = x / norm, y / tau, z / tau
        certificate = dict(direction=None, residual=info.get("unboundedness_ray"),
                           tau_over_kappa=tau / kappa)
    else:
        xs, ys, zs = x / tau, y / tau, z / tau

    # user sign convention: S = C - sum_i mult_i A_i, dual objective = rhs . mult
    mult[lp.ineq_idx] = -lp.ineq_sign * zs[:lp.ni]
    mult[lp.eq_idx] = -ys

    blocks = [smat(xs[lp.voff[k]:lp.voff[k + 1]], d) for k, d in enumerate(lp.dims)]
    dual_blocks = [smat(zb, d) for zb, d in zip(lp.blocks_of(zs), lp.dims)]
    if status == INFEASIBLE:
        certificate["multipliers"] = mult.copy()
        certificate["dual_blocks"] = dual_blocks
    if status == UNBOUNDED:
        certificate["direction"] = blocks
    return SdpSolution(
        status=status,
        blocks=blocks,
        linear=xs[lp.nb:].copy(),
        duals=mult,
        dual_blocks=dual_blocks,
        dual_linear=zs[lp.ni:lp.no].copy(),
        objective=float(lp.c @ xs),
        dual_objective=float(-(lp.b @ ys + lp.h @ zs)),
        residuals=info,
        iterations=it,
        certificate=certificate,
    )


# -- complex Hermitian front end ----------------------------------------------

def assemble_complex(dims, objective, constraints, n_linear=0, linear_objective=None):
    """Real problem equivalent to one stated over Hermitian blocks.

    Every Hermitian coefficient A is replaced by real_embed(A) / 2, so that
    <real_embed(A)/2, real_embed(X)> = Tr(A X) exactly. Map solutions back with
    :func:`hermitian_blocks`.
    """
    dims = [int(d) for d in dims]
    if len(objective) != len(dims):
        raise InvalidInput("objective needs one matrix (or None) per block")

    def emb(a, d, what):
        a = np.asarray(a)
        if a.shape != (d, d):
            raise InvalidInput(f"{what}: expected shape {(d, d)}, got {a.shape}")
        return 0.5 * real_embed(as_hermitian(a))

    obj = [None if c is None else emb(c, dims[k], f"objective block {k}")
           for k, c in enumerate(objective)]
    cons = []
    for i, con in enumerate(constraints):
        blocks = {}
        for k, a in con.blocks.items():
            if not 0 <= k < len(dims):
                raise InvalidInput(f"constraint {i}: no block {k}")
            blocks[k] = emb(a, dims[k], f"constraint {i} block {k}")
        cons.append(Constraint(blocks, con.sense, float(con.rhs), dict(con.linear)))
    return SdpProblem([2 * d for d in dims], obj, cons, n_linear, linear_objective)


def hermitian_blocks(solution_blocks):
    """Hermitian matrices represented by the real blocks of an embedded solution."""
    return [real_unembed(y) for y in solution_blocks]


# -- text dump ----------------------------------------------------------------

def dump_problem(prob: SdpProblem, fh):
    """Write ``prob`` in the line-oriented triplet format described in the README."""
    fh.write("# secbeam-sdp 1\n")
    fh.write("blocks " + " ".join(str(int(d)) for d in prob.block_dims) + "\n")
    fh.write(f"linear {int(prob.n_linear)}\n")

    def terms(blocks, linear):
        out = []
        for k in sorted(blocks):
            a = np.asarray(blocks[k], dtype=float)
            for i, j in zip(*np.triu_indices(a.shape[0])):
                if a[i, j] != 0.0:
                    out.append(f"b{k}:{i}:{j}:{a[i, j]:.17g}")
        for j in sorted(linear):
            if linear[j] != 0.0:
                out.append(f"l{j}:{float(linear[j]):.17g}")
        return " ".join(out)

    obj_blocks = {k: c for k, c in enumerate(prob.objective) if c is not None}
    lin = {} if prob.linear_objective is None else dict(enumerate(prob.linear_objective))
    fh.write(("objective " + terms(obj_blocks, lin)).rstrip() + "\n")
    for con in prob.constraints:
        fh.write((f"c {con.sense} {float(con.rhs):.17g} " + terms(con.blocks, con.linear)).rstrip() + "\n")


def load_problem(fh) -> SdpProblem:
    dims, n_lin, obj, cons = None, 0, None, []

    def parse_terms(tokens):
        blocks, linear = {}, {}
        for tok in tokens:
            if tok.startswith("b"):
                k, i, j, v = tok[1:].split(":")
                k, i, j, v = int(k), int(i), int(j), float(v)
                a = blocks.setdefault(k, np.zeros((dims[k], dims[k])))
                a[i, j] = a[j, i] = v
            elif tok.startswith("l"):
                j, v = tok[1:].split(":")
                linear[int(j)] = float(v)
            else:
                raise InvalidInput(f"bad term {tok!r}")
        return blocks, linear

    for line in fh:
        parts = line.split()
        if not parts or parts[0].startswith("#"):
            continue
        head = parts[0]
        if head == "blocks":
            dims = [int(p) for p in parts[1:]]
        elif head == "linear":
            n_lin = int(parts[1])
        elif head == "objective":
            obj = parse_terms(parts[1:])
        elif head == "c":
            blocks, linear = parse_terms(parts[3:])
            cons.append(Constraint(blocks, parts[1], float(parts[2]), linear))
        else:
            raise InvalidInput(f"unknown record {head!r}")
    if dims is None:
        raise InvalidInput("missing 'blocks' record")
    ob, ol = obj if obj is not None else ({}, {})
    objective = [ob.get(k) for k in range(len(dims))]
    lin_obj = None
    if n_lin:
        lin_obj = np.zeros(n_lin)
        for j, v in ol.items():
            lin_obj[j] = v
    return SdpProblem(dims, objective, cons, n_lin, lin_obj)
