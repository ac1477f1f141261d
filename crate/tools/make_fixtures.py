#!/usr/bin/env python3
"""Generate the FCIDUMP fixture files shipped under fixtures/.

Self-contained restricted Hartree-Fock with McMurchie-Davidson s/p Gaussian
integrals (numpy + scipy only), followed by an MO transformation and an
FCIDUMP write.  A determinant-level FCI check validates every file against
literature energies before it is frozen.

Usage:  python3 tools/make_fixtures.py [outdir]
"""

import itertools
import math
import sys
from pathlib import Path

import numpy as np
from scipy.special import hyp1f1

ANGSTROM = 1.0 / 0.52917721067  # bohr per angstrom

# ---------------------------------------------------------------------------
# Basis set data (exponents, contraction coefficients)
# ---------------------------------------------------------------------------

STO3G_H = [("s", [(3.42525091, 0.15432897), (0.62391373, 0.53532814), (0.16885540, 0.44463454)])]

STO3G_O = [
    ("s", [(130.7093200, 0.15432897), (23.8088610, 0.53532814), (6.4436083, 0.44463454)]),
    ("s", [(5.0331513, -0.09996723), (1.1695961, 0.39951283), (0.3803890, 0.70011547)]),
    ("p", [(5.0331513, 0.15591627), (1.1695961, 0.60768372), (0.3803890, 0.39195739)]),
]

G631_H = [
    ("s", [(18.7311370, 0.03349460), (2.8253937, 0.23472695), (0.6401217, 0.81375733)]),
    ("s", [(0.1612778, 1.0)]),
]

G631_LI = [
    ("s", [(642.4189200, 0.0021426), (96.7985150, 0.0162089), (22.0911210, 0.0773156),
           (6.2010703, 0.2457860), (1.9351177, 0.4701890), (0.6367358, 0.3454708)]),
    ("s", [(2.3249184, -0.0350917), (0.6324306, -0.1912328), (0.0790534, 1.0839878)]),
    ("p", [(2.3249184, 0.0089415), (0.6324306, 0.1410095), (0.0790534, 0.9453637)]),
    ("s", [(0.0359620, 1.0)]),
    ("p", [(0.0359620, 1.0)]),
]

CARTS = {"s": [(0, 0, 0)], "p": [(1, 0, 0), (0, 1, 0), (0, 0, 1)]}


def double_factorial(n):
    return 1 if n <= 1 else n * double_factorial(n - 2)


class Cgto:
    """One contracted Cartesian Gaussian."""

    def __init__(self, center, lmn, prims):
        self.center = np.asarray(center, dtype=float)
        self.lmn = lmn
        l = sum(lmn)
        norm_prims = []
        for alpha, c in prims:
            nrm = math.sqrt(
                (2 * alpha / math.pi) ** 1.5
                * (4 * alpha) ** l
                / (double_factorial(2 * lmn[0] - 1)
                   * double_factorial(2 * lmn[1] - 1)
                   * double_factorial(2 * lmn[2] - 1))
            )
            norm_prims.append((alpha, c * nrm))
        # scale so the contracted self-overlap is exactly 1
        s = 0.0
        for a, ca in norm_prims:
            for b, cb in norm_prims:
                s += ca * cb * _prim_overlap(a, self.center, lmn, b, self.center, lmn)
        self.prims = [(a, c / math.sqrt(s)) for a, c in norm_prims]


def build_basis(atoms, shells_per_elem):
    basis = []
    for elem, center in atoms:
        for kind, prims in shells_per_elem[elem]:
            for lmn in CARTS[kind]:
                basis.append(Cgto(center, lmn, prims))
    return basis


# ---------------------------------------------------------------------------
# McMurchie-Davidson machinery
# ---------------------------------------------------------------------------

def hermite_e(i, j, t, qx, a, b):
    p = a + b
    q = a * b / p
    if t < 0 or t > i + j:
        return 0.0
    if i == j == t == 0:
        return math.exp(-q * qx * qx)
    if j == 0:
        return (hermite_e(i - 1, j, t - 1, qx, a, b) / (2 * p)
                - q * qx / a * hermite_e(i - 1, j, t, qx, a, b)
                + (t + 1) * hermite_e(i - 1, j, t + 1, qx, a, b))
    return (hermite_e(i, j - 1, t - 1, qx, a, b) / (2 * p)
            + q * qx / b * hermite_e(i, j - 1, t, qx, a, b)
            + (t + 1) * hermite_e(i, j - 1, t + 1, qx, a, b))


def _prim_overlap(a, ra, la, b, rb, lb):
    p = a + b
    out = (math.pi / p) ** 1.5
    for d in range(3):
        out *= hermite_e(la[d], lb[d], 0, ra[d] - rb[d], a, b)
    return out


def _prim_kinetic(a, ra, la, b, rb, lb):
    s = [hermite_e(la[d], lb[d], 0, ra[d] - rb[d], a, b) for d in range(3)]
    t = []
    for d in range(3):
        j = lb[d]
        term = b * (2 * j + 1) * hermite_e(la[d], j, 0, ra[d] - rb[d], a, b)
        term -= 2 * b * b * hermite_e(la[d], j + 2, 0, ra[d] - rb[d], a, b)
        if j >= 2:
            term -= 0.5 * j * (j - 1) * hermite_e(la[d], j - 2, 0, ra[d] - rb[d], a, b)
        t.append(term)
    pref = (math.pi / (a + b)) ** 1.5
    return pref * (t[0] * s[1] * s[2] + s[0] * t[1] * s[2] + s[0] * s[1] * t[2])


def boys(n, x):
    return hyp1f1(n + 0.5, n + 1.5, -x) / (2 * n + 1)


def hermite_coulomb(t, u, v, n, p, pc):
    if t < 0 or u < 0 or v < 0:
        return 0.0
    if t == u == v == 0:
        return (-2 * p) ** n * boys(n, p * float(np.dot(pc, pc)))
    if t > 0:
        return ((t - 1) * hermite_coulomb(t - 2, u, v, n + 1, p, pc)
                + pc[0] * hermite_coulomb(t - 1, u, v, n + 1, p, pc))
    if u > 0:
        return ((u - 1) * hermite_coulomb(t, u - 2, v, n + 1, p, pc)
                + pc[1] * hermite_coulomb(t, u - 1, v, n + 1, p, pc))
    return ((v - 1) * hermite_coulomb(t, u, v - 2, n + 1, p, pc)
            + pc[2] * hermite_coulomb(t, u, v - 1, n + 1, p, pc))


def _prim_nuclear(a, ra, la, b, rb, lb, rc):
    p = a + b
    rp = (a * ra + b * rb) / p
    ab = ra - rb
    ex = [hermite_e(la[0], lb[0], t, ab[0], a, b) for t in range(la[0] + lb[0] + 1)]
    ey = [hermite_e(la[1], lb[1], u, ab[1], a, b) for u in range(la[1] + lb[1] + 1)]
    ez = [hermite_e(la[2], lb[2], v, ab[2], a, b) for v in range(la[2] + lb[2] + 1)]
    val = 0.0
    for t, cx in enumerate(ex):
        for u, cy in enumerate(ey):
            for v, cz in enumerate(ez):
                val += cx * cy * cz * hermite_coulomb(t, u, v, 0, p, rp - rc)
    return 2 * math.pi / p * val


def _pair_hermite(ga, gb):
    """Hermite expansion of a contracted pair: list of (p, rp, coeffs[t,u,v])."""
    out = []
    ab = ga.center - gb.center
    for a, ca in ga.prims:
        for b, cb in gb.prims:
            p = a + b
            rp = (a * ga.center + b * gb.center) / p
            ex = [hermite_e(ga.lmn[0], gb.lmn[0], t, ab[0], a, b) for t in range(ga.lmn[0] + gb.lmn[0] + 1)]
            ey = [hermite_e(ga.lmn[1], gb.lmn[1], u, ab[1], a, b) for u in range(ga.lmn[1] + gb.lmn[1] + 1)]
            ez = [hermite_e(ga.lmn[2], gb.lmn[2], v, ab[2], a, b) for v in range(ga.lmn[2] + gb.lmn[2] + 1)]
            coeffs = []
            for t, cx in enumerate(ex):
                for u, cy in enumerate(ey):
                    for v, cz in enumerate(ez):
                        c = ca * cb * cx * cy * cz
                        if abs(c) > 1e-16:
                            coeffs.append((t, u, v, c))
            out.append((p, rp, coeffs))
    return out


def integrals(basis, atoms_z):
    n = len(basis)
    S = np.zeros((n, n))
    T = np.zeros((n, n))
    V = np.zeros((n, n))
    for i in range(n):
        for j in range(i + 1):
            gi, gj = basis[i], basis[j]
            s = t = v = 0.0
            for a, ca in gi.prims:
                for b, cb in gj.prims:
                    s += ca * cb * _prim_overlap(a, gi.center, gi.lmn, b, gj.center, gj.lmn)
                    t += ca * cb * _prim_kinetic(a, gi.center, gi.lmn, b, gj.center, gj.lmn)
                    for z, rc in atoms_z:
                        v -= z * ca * cb * _prim_nuclear(a, gi.center, gi.lmn, b, gj.center, gj.lmn, rc)
            S[i, j] = S[j, i] = s
            T[i, j] = T[j, i] = t
            V[i, j] = V[j, i] = v

    pairs = {}
    for i in range(n):
        for j in range(i + 1):
            pairs[(i, j)] = _pair_hermite(basis[i], basis[j])

    eri = np.zeros((n, n, n, n))
    done = set()
    for i in range(n):
        for j in range(i + 1):
            for k in range(n):
                for l in range(k + 1):
                    if (i, j) < (k, l):
                        continue
                    val = 0.0
                    for p, rp, ca in pairs[(i, j)]:
                        for q, rq, cb in pairs[(k, l)]:
                            alpha = p * q / (p + q)
                            pref = 2 * math.pi ** 2.5 / (p * q * math.sqrt(p + q))
                            pq = rp - rq
                            for t, u, v, c1 in ca:
                                for tt, uu, vv, c2 in cb:
                                    sgn = (-1) ** (tt + uu + vv)
                                    val += pref * c1 * c2 * sgn * hermite_coulomb(
                                        t + tt, u + uu, v + vv, 0, alpha, pq)
                    for (a, b), (c, d) in itertools.product([(i, j), (j, i)], [(k, l), (l, k)]):
                        eri[a, b, c, d] = eri[c, d, a, b] = val
    return S, T, V, eri


# ---------------------------------------------------------------------------
# RHF + MO transformation + FCIDUMP
# ---------------------------------------------------------------------------

def rhf(S, Hcore, eri, nelec, e_nuc, maxiter=200):
    nocc = nelec // 2
    evals, evecs = np.linalg.eigh(S)
    X = evecs @ np.diag(evals ** -0.5) @ evecs.T
    F = Hcore.copy()
    e_old = 0.0
    D = None
    for it in range(maxiter):
        Fp = X.T @ F @ X
        eps, Cp = np.linalg.eigh(Fp)
        C = X @ Cp
        Cocc = C[:, :nocc]
        D = 2.0 * Cocc @ Cocc.T
        J = np.einsum("pqrs,rs->pq", eri, D)
        K = np.einsum("prqs,rs->pq", eri, D)
        F = Hcore + J - 0.5 * K
        e_el = 0.5 * np.sum(D * (Hcore + F))
        if abs(e_el - e_old) < 1e-13 and it > 3:
            break
        e_old = e_el
    return e_el + e_nuc, C, eps


def mo_transform(Hcore, eri, C):
    h_mo = C.T @ Hcore @ C
    eri_mo = np.einsum("pqrs,pi,qj,rk,sl->ijkl", eri, C, C, C, C, optimize=True)
    return h_mo, eri_mo


def write_fcidump(path, norb, nelec, ms2, h_mo, eri_mo, e_core, thresh=1e-12):
    lines = [f" &FCI NORB={norb:3d},NELEC={nelec:2d},MS2={ms2:2d},"]
    lines.append("  ORBSYM=" + "1," * norb)
    lines.append("  ISYM=1,")
    lines.append(" &END")
    seen = set()
    for p in range(norb):
        for q in range(p + 1):
            for r in range(norb):
                for s in range(r + 1):
                    if (p, q) < (r, s):
                        continue
                    key = (p, q, r, s)
                    if key in seen:
                        continue
                    seen.add(key)
                    v = eri_mo[p, q, r, s]
                    if abs(v) > thresh:
                        lines.append(f"{v:23.16E} {p+1:3d} {q+1:3d} {r+1:3d} {s+1:3d}")
    for p in range(norb):
        for q in range(p + 1):
            v = h_mo[p, q]
            if abs(v) > thresh:
                lines.append(f"{v:23.16E} {p+1:3d} {q+1:3d}   0   0")
    lines.append(f"{e_core:23.16E}   0   0   0   0")
    Path(path).write_text("\n".join(lines) + "\n")


# ---------------------------------------------------------------------------
# Determinant FCI validation (Sz = 0)
# ---------------------------------------------------------------------------

def fci_ground(h_mo, eri_mo, norb, nelec):
    nocc = nelec // 2
    occs = list(itertools.combinations(range(norb), nocc))
    dets = [(a, b) for a in occs for b in occs]
    hf = (tuple(range(nocc)), tuple(range(nocc)))
    dets.remove(hf)
    dets.insert(0, hf)
    dim = len(dets)

    def mask(occ):
        m = 0
        for o in occ:
            m |= 1 << o
        return m

    masks = [(mask(a), mask(b)) for a, b in dets]

    def parity(m, i, j):
        lo, hi = min(i, j), max(i, j)
        bits = bin(m & (((1 << hi) - 1) ^ ((1 << (lo + 1)) - 1))).count("1")
        return -1.0 if bits % 2 else 1.0

    H = np.zeros((dim, dim))
    for I in range(dim):
        ma, mb = masks[I]
        occ_a = [o for o in range(norb) if ma >> o & 1]
        occ_b = [o for o in range(norb) if mb >> o & 1]
        # diagonal
        e = sum(h_mo[i, i] for i in occ_a) + sum(h_mo[i, i] for i in occ_b)
        for i in occ_a:
            for j in occ_a:
                e += 0.5 * (eri_mo[i, i, j, j] - eri_mo[i, j, j, i])
            for j in occ_b:
                e += 0.5 * eri_mo[i, i, j, j]
        for i in occ_b:
            for j in occ_b:
                e += 0.5 * (eri_mo[i, i, j, j] - eri_mo[i, j, j, i])
            for j in occ_a:
                e += 0.5 * eri_mo[i, i, j, j]
        H[I, I] = e
        for J in range(I):
            na, nb = masks[J]
            da, db = ma ^ na, mb ^ nb
            exc = bin(da).count("1") // 2 + bin(db).count("1") // 2
            if exc > 2:
                continue
            if bin(da).count("1") == 2 and bin(db).count("1") == 0:
                p = (ma & da).bit_length() - 1
                q = (na & da).bit_length() - 1
                sgn = parity(ma, p, q)
                v = h_mo[p, q]
                for i in occ_a:
                    if i != p:
                        v += eri_mo[p, q, i, i] - eri_mo[p, i, i, q]
                for i in occ_b:
                    v += eri_mo[p, q, i, i]
                H[I, J] = H[J, I] = sgn * v
            elif bin(db).count("1") == 2 and bin(da).count("1") == 0:
                p = (mb & db).bit_length() - 1
                q = (nb & db).bit_length() - 1
                sgn = parity(mb, p, q)
                v = h_mo[p, q]
                for i in occ_b:
                    if i != p:
                        v += eri_mo[p, q, i, i] - eri_mo[p, i, i, q]
                for i in occ_a:
                    v += eri_mo[p, q, i, i]
                H[I, J] = H[J, I] = sgn * v
            elif bin(da).count("1") == 2 and bin(db).count("1") == 2:
                p = (ma & da).bit_length() - 1
                q = (na & da).bit_length() - 1
                r = (mb & db).bit_length() - 1
                s = (nb & db).bit_length() - 1
                sgn = parity(ma, p, q) * parity(mb, r, s)
                H[I, J] = H[J, I] = sgn * eri_mo[p, q, r, s]
            elif bin(da).count("1") == 4:
                p, q = [o for o in range(norb) if (ma & da) >> o & 1]
                r, s = [o for o in range(norb) if (na & da) >> o & 1]
                H[I, J] = H[J, I] = _double_same_spin(ma, na, p, q, r, s, eri_mo)
            elif bin(db).count("1") == 4:
                p, q = [o for o in range(norb) if (mb & db) >> o & 1]
                r, s = [o for o in range(norb) if (nb & db) >> o & 1]
                H[I, J] = H[J, I] = _double_same_spin(mb, nb, p, q, r, s, eri_mo)
    w, vecs = np.linalg.eigh(H)
    return w, vecs, H


def _double_same_spin(mi, mj, p, q, r, s, eri_mo):
    # <I| H |J> with I holding p<q where J holds r<s (same spin channel).
    # sign from sequentially applying a_s a_r (r first) then a+_q a+_p to |J>.
    sign = 1.0
    mk = mj
    for o in (r, s, q, p):
        if bin(mk & ((1 << o) - 1)).count("1") % 2:
            sign = -sign
        mk ^= 1 << o
    assert mk == mi
    return sign * (eri_mo[p, r, q, s] - eri_mo[p, s, q, r])


# ---------------------------------------------------------------------------
# Molecule drivers
# ---------------------------------------------------------------------------

def run(name, atoms, shells, nelec, out, expect=None):
    atoms_z = [(z, np.asarray(r, dtype=float)) for (z, _e, r) in atoms]
    basis = build_basis([(e, r) for (_z, e, r) in atoms], shells)
    e_nuc = 0.0
    for (za, ra), (zb, rb) in itertools.combinations(atoms_z, 2):
        e_nuc += za * zb / np.linalg.norm(ra - rb)
    S, T, V, eri = integrals(basis, atoms_z)
    Hcore = T + V
    e_hf, C, eps = rhf(S, Hcore, eri, nelec, e_nuc)
    h_mo, eri_mo = mo_transform(Hcore, eri, C)
    norb = len(basis)
    write_fcidump(out, norb, nelec, 0, h_mo, eri_mo, e_nuc)
    w, vecs, H = fci_ground(h_mo, eri_mo, norb, nelec)
    e0_el = w[0]
    print(f"{name}: nbf={norb}  E_nuc={e_nuc:.8f}  E_HF={e_hf:.8f}  "
          f"E_FCI(el)={e0_el:.7f}  E_FCI(tot)={e0_el + e_nuc:.7f}  "
          f"|c_HF|^2={vecs[0, 0] ** 2:.4f}")
    if expect is not None:
        print(f"    paper E_el={expect:.7f}  delta={e0_el - expect:+.3e}")
    return w, vecs, H, e_nuc, e_hf


def h2(r_angstrom, outdir):
    r = r_angstrom * ANGSTROM
    atoms = [(1, "H", (0, 0, 0)), (1, "H", (0, 0, r))]
    return run(f"H2 STO-3G r={r_angstrom} A", atoms, {"H": STO3G_H}, 2,
               outdir / f"h2_sto3g_{r_angstrom:.2f}.fcidump")


def h2o(outdir):
    r = 0.9576 * ANGSTROM
    half = math.radians(104.51 / 2)
    atoms = [
        (8, "O", (0.0, 0.0, 0.0)),
        (1, "H", (r * math.sin(half), 0.0, r * math.cos(half))),
        (1, "H", (-r * math.sin(half), 0.0, r * math.cos(half))),
    ]
    return run("H2O STO-3G", atoms, {"O": STO3G_O, "H": STO3G_H}, 10,
               outdir / "h2o_sto3g.fcidump", expect=-84.203665)


def lih(outdir):
    r = 1.40 * ANGSTROM
    atoms = [(3, "Li", (0, 0, 0)), (1, "H", (0, 0, r))]
    return run("LiH 6-31G", atoms, {"Li": G631_LI, "H": G631_H}, 4,
               outdir / "lih_631g.fcidump", expect=-9.1228934)


def _selftest():
    """Check the Slater-Condon code against literal operator application."""
    rng = np.random.default_rng(7)
    norb = 4
    h = rng.normal(size=(norb, norb))
    h = 0.5 * (h + h.T)
    g = rng.normal(size=(norb,) * 4)
    # enforce 8-fold real-orbital symmetry of (pq|rs)
    g = g + g.transpose(1, 0, 2, 3)
    g = g + g.transpose(0, 1, 3, 2)
    g = g + g.transpose(2, 3, 0, 1)
    nspin = 2 * norb
    dim = 1 << nspin

    def annihilate(state, k):
        mask, amp = state
        if not (mask >> k) & 1:
            return None
        sgn = -1.0 if bin(mask & ((1 << k) - 1)).count("1") % 2 else 1.0
        return (mask ^ (1 << k), amp * sgn)

    def create(state, k):
        mask, amp = state
        if (mask >> k) & 1:
            return None
        sgn = -1.0 if bin(mask & ((1 << k) - 1)).count("1") % 2 else 1.0
        return (mask | (1 << k), amp * sgn)

    # alpha-then-beta spin-orbital ordering: alpha o -> bit o, beta o -> bit norb+o
    def so(o, sp):
        return o + sp * norb

    H = np.zeros((dim, dim))
    for col in range(dim):
        for p in range(norb):
            for q in range(norb):
                for sp in range(2):
                    st = annihilate((col, 1.0), so(q, sp))
                    if st:
                        st = create(st, so(p, sp))
                    if st:
                        H[st[0], col] += h[p, q] * st[1]
        for p in range(norb):
            for r in range(norb):
                for q in range(norb):
                    for s in range(norb):
                        for sp in range(2):
                            for tp in range(2):
                                st = annihilate((col, 1.0), so(r, sp))
                                if st:
                                    st = annihilate(st, so(s, tp))
                                if st:
                                    st = create(st, so(q, tp))
                                if st:
                                    st = create(st, so(p, sp))
                                if st:
                                    H[st[0], col] += 0.5 * g[p, r, q, s] * st[1]
    # elementwise compare on the na=nb=2 sector, same determinant ordering
    nocc = 2
    occs = list(itertools.combinations(range(norb), nocc))
    dets = [(a, b) for a in occs for b in occs]
    hf = (tuple(range(nocc)), tuple(range(nocc)))
    dets.remove(hf)
    dets.insert(0, hf)

    def mask(occ):
        m = 0
        for o in occ:
            m |= 1 << o
        return m

    idx = [mask(a) | (mask(b) << norb) for a, b in dets]
    Hsc = fci_ground(h, g, norb, 4)[2]
    err = np.max(np.abs(H[np.ix_(idx, idx)] - Hsc))
    print(f"selftest: Slater-Condon vs Fock-space elementwise max diff = {err:.2e}")
    assert err < 1e-10, "Slater-Condon sign conventions are wrong"


if __name__ == "__main__":
    _selftest()
    outdir = Path(sys.argv[1]) if len(sys.argv) > 1 else Path("fixtures")
    outdir.mkdir(exist_ok=True)
    for r in (0.74, 1.0, 1.5, 2.0, 2.5, 5.0):
        h2(r, outdir)
    h2o(outdir)
    lih(outdir)
