# Copyright 2026 The owaelicit Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Independent oracles for the frozen expected values used by the C++ tests.

Brute-force enumeration plus scipy LPs; shares no code with the library.
Run: python3 tests/oracles/worked_examples.py
"""
import itertools

import numpy as np
from scipy.optimize import linprog


def selections(n, p):
    for comb in itertools.combinations(range(n), p):
        x = np.zeros(n)
        x[list(comb)] = 1
        yield x


def sorted_objs(C, x):
    return np.sort(C @ x)[::-1]


def owa(w, C, x):
    return float(np.dot(w, sorted_objs(C, x)))


def monotone_rows(K):
    rows = []
    for k in range(K - 1):
        r = np.zeros(K)
        r[k] = -1
        r[k + 1] = 1
        rows.append(r)
    return rows


def dist_to_opt(w, C, xs, sols):
    """min ||w - v||_1 over v in opt (W' and x^s optimal)."""
    K = len(w)
    # vars: v (K), d (K)
    A, b = [], []
    a_s = sorted_objs(C, xs)
    for x in sols:
        r = np.zeros(2 * K)
        r[:K] = a_s - sorted_objs(C, x)
        A.append(r)
        b.append(0)
    for mr in monotone_rows(K):
        A.append(np.concatenate([mr, np.zeros(K)]))
        b.append(0)
    for k in range(K):
        r = np.zeros(2 * K); r[k] = 1; r[K + k] = -1; A.append(r); b.append(w[k])
        r = np.zeros(2 * K); r[k] = -1; r[K + k] = -1; A.append(r); b.append(-w[k])
    Aeq = [np.concatenate([np.ones(K), np.zeros(K)])]
    res = linprog(np.concatenate([np.zeros(K), np.ones(K)]), A_ub=A, b_ub=b, A_eq=Aeq, b_eq=[1],
                  bounds=[(0, 1)] * K + [(0, None)] * K, method="highs")
    return res.fun if res.status == 0 else float("inf")


def pref_optimum(obs, sols):
    """Full (Pref) with 1-norm over all of X."""
    S = len(obs)
    K = obs[0][0].shape[0]
    nv = K + S * K + S * K
    c = np.zeros(nv)
    c[K + S * K:] = 1
    A, b, Aeq, beq = [], [], [], []
    def wi(k): return k
    def wsi(s, k): return K + s * K + k
    def di(s, k): return K + S * K + s * K + k
    for s, (C, xs) in enumerate(obs):
        a_s = sorted_objs(C, xs)
        for x in sols:
            r = np.zeros(nv)
            for k in range(K):
                r[wsi(s, k)] = a_s[k] - sorted_objs(C, x)[k]
            A.append(r); b.append(0)
        r = np.zeros(nv)
        for k in range(K): r[wsi(s, k)] = 1
        Aeq.append(r); beq.append(1)
        for k in range(K - 1):
            r = np.zeros(nv); r[wsi(s, k)] = -1; r[wsi(s, k + 1)] = 1; A.append(r); b.append(0)
        for k in range(K):
            r = np.zeros(nv); r[wi(k)] = 1; r[wsi(s, k)] = -1; r[di(s, k)] = -1; A.append(r); b.append(0)
            r = np.zeros(nv); r[wi(k)] = -1; r[wsi(s, k)] = 1; r[di(s, k)] = -1; A.append(r); b.append(0)
    r = np.zeros(nv)
    for k in range(K): r[wi(k)] = 1
    Aeq.append(r); beq.append(1)
    for k in range(K - 1):
        r = np.zeros(nv); r[wi(k)] = -1; r[wi(k + 1)] = 1; A.append(r); b.append(0)
    res = linprog(c, A_ub=A, b_ub=b, A_eq=Aeq, b_eq=beq,
                  bounds=[(0, 1)] * (K + S * K) + [(0, None)] * (S * K), method="highs")
    return res.fun, res.x[:K]


def simplex_grid(K, step):
    m = round(1 / step)
    if K == 3:
        for i in range(m + 1):
            for j in range(m + 1 - i):
                yield np.array([i, j, m - i - j]) / m


def section31():
    C = np.array([[1, 6, 8, 4], [6, 7, 8, 3], [9, 3, 2, 8]], float)
    sols = list(selections(4, 3))
    print("== 3.1 instance ==")
    for x in sols:
        print(x, sorted_objs(C, x), "wc", owa([1, 0, 0], C, x), "half", owa([.5, .5, 0], C, x))
    xs = np.array([1, 1, 1, 0.])
    print("Pref optimum, w:", pref_optimum([(C, xs)], sols))
    print("explains gap w=(1,0,0):", owa([1, 0, 0], C, xs) - min(owa([1, 0, 0], C, x) for x in sols))
    print("owa (1/3..) x=(0,1,1,1):", owa([1/3] * 3, C, np.array([0, 1, 1, 1.])))
    c1 = C[0]
    print("weighted-sum lambda=(1,0,0) argmin:", min(sols, key=lambda x: c1 @ x))


def appendix_a():
    C1 = np.array([[0.6, 1, 0.5, 0], [1, 0.7, 0, 0.3], [0, 0, 0.8, 1]])
    C2 = np.array([[0.8, 1, 0.3, 0], [0.8, 0, 1, 0.6], [0.8, 1, 0.1, 0]])
    x1 = np.array([0, 0, 1, 1.])
    x2 = np.array([0, 1, 0, 1.])
    sols = list(selections(4, 2))
    obs = [(C1, x1), (C2, x2)]
    print("== Appendix A ==")
    for C, xs, wtrue in [(C1, x1, [.35, .33, .32]), (C2, x2, [.54, .33, .13])]:
        best = min(sols, key=lambda x: owa(wtrue, C, x))
        print(" generating w reproduces x^s:", np.array_equal(best, xs))
    val, w = pref_optimum(obs, sols)
    print(" Pref optimum value:", val, "w:", w)
    wp = np.array([0.46, 0.29, 0.25])
    vp = sum(dist_to_opt(wp, C, xs, sols) for C, xs in obs)
    print(" objective at (0.46,0.29,0.25):", vp)
    for wtest in [wp, w]:
        tot = 0
        for C, xs in obs:
            vals = sorted((owa(wtest, C, x), tuple(x)) for x in sols)
            tot += int(np.abs(np.array(vals[0][1]) - xs).sum())
            print("  w", np.round(wtest, 4), "argmin", vals[0][1], "runner-up gap", vals[1][0] - vals[0][0])
        print("  summed hamming:", tot)
    # (Pref') by grid search over W' (step 0.01)
    best = None
    for wg in simplex_grid(3, 0.01):
        if not (wg[0] >= wg[1] >= wg[2]):
            continue
        tot = 0
        for C, xs in obs:
            vals = [owa(wg, C, x) for x in sols]
            m = min(vals)
            tot += min(int(np.abs(x - xs).sum()) for x, v in zip(sols, vals) if v <= m + 1e-9)
        if best is None or tot < best[0]:
            best = (tot, wg)
    print(" Pref' grid optimum:", best)
    for C, xs in obs:
        vals = sorted((owa([1, 0, 0], C, x), tuple(x)) for x in sols)
        print("  w=(1,0,0) argmin", vals[0][1], "gap to next", vals[1][0] - vals[0][0])


def orness_lp(K, alpha):
    # vars w (K), delta
    c = np.zeros(K + 1); c[K] = 1
    A, b = [], []
    for k in range(K - 1):
        r = np.zeros(K + 1); r[k] = 1; r[k + 1] = -1; r[K] = -1; A.append(r); b.append(0)
        r = np.zeros(K + 1); r[k] = -1; r[k + 1] = 1; r[K] = -1; A.append(r); b.append(0)
        r = np.zeros(K + 1); r[k] = -1; r[k + 1] = 1; A.append(r); b.append(0)
    Aeq = [np.concatenate([np.ones(K), [0]]),
           np.concatenate([[(K - 1 - k) / (K - 1) for k in range(K)], [0]])]
    res = linprog(c, A_ub=A, b_ub=b, A_eq=Aeq, b_eq=[1, alpha],
                  bounds=[(0, 1)] * K + [(0, None)], method="highs")
    return res.x[:K], res.fun


def orness_checks():
    print("== orness generator ==")
    w, d = orness_lp(3, 0.75)
    print(" LP K=3 a=.75:", w, "delta", d)
    best = None
    m = 1200
    for i in range(m + 1):
        for j in range(m + 1 - i):
            wg = np.array([i, j, m - i - j]) / m
            if not (wg[0] >= wg[1] >= wg[2]):
                continue
            if abs((2 * wg[0] + wg[1]) / 2 - 0.75) > 1e-12:
                continue
            disp = max(abs(wg[0] - wg[1]), abs(wg[1] - wg[2]))
            if best is None or disp < best[0] - 1e-12:
                best = (disp, wg)
    print(" grid:", best)


def infeas_example():
    print("== infeas example ==")
    C = np.array([[0, 1, 1], [0, 1, 1.]])
    sols = [np.eye(3)[i] for i in range(3)]
    xs = sols[1]
    best = None
    for t in np.linspace(0.5, 1, 501):
        wv = np.array([t, 1 - t])
        v = max(owa(wv, C, xs) - owa(wv, C, x) for x in sols)
        best = v if best is None else min(best, v)
    print(" infeas:", best)


def binary_example():
    print("== binary LP example ==")
    print(min(-a - b for a in (0, 1) for b in (0, 1) if a + b <= 1))


if __name__ == "__main__":
    section31()
    appendix_a()
    orness_checks()
    infeas_example()
    binary_example()
