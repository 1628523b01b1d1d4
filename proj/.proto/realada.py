"""Confidence-rated (real) AdaBoost with stumps: leaf values 0.5*ln(W+/W-),
cost-5 initial weights. Compare to discrete variant."""
import numpy as np
from feasibility import gen, Q

EPS = 1e-12


def train_real_ada(X, y, cost, rounds, smooth=None):
    n, f = X.shape
    if smooth is None:
        smooth = 1.0 / n
    w = np.where(y < 0, cost, 1.0)
    w /= w.sum()
    orders = [np.argsort(X[:, j], kind="stable") for j in range(f)]
    stumps = []
    for m in range(rounds):
        best = None  # (Z, j, thr, lv, rv)
        for j in range(f):
            o = orders[j]
            xs = X[o, j]; ys = y[o]; ws = w[o]
            wp = np.where(ys > 0, ws, 0).cumsum()
            wn = np.where(ys < 0, ws, 0).cumsum()
            WP, WN = wp[-1], wn[-1]
            cuts = np.nonzero(np.diff(xs) > 0)[0]
            if len(cuts) == 0:
                continue
            WpL = wp[cuts]; WnL = wn[cuts]
            WpR = WP - WpL; WnR = WN - WnL
            # Z = 2*sum(sqrt(W+ W-)) over the two leaves
            Z = 2 * (np.sqrt(WpL * WnL) + np.sqrt(WpR * WnR))
            i = np.argmin(Z)
            thr = 0.5 * (xs[cuts[i]] + xs[cuts[i] + 1])
            lv = 0.5 * np.log((WpL[i] + smooth) / (WnL[i] + smooth))
            rv = 0.5 * np.log((WpR[i] + smooth) / (WnR[i] + smooth))
            if best is None or Z[i] < best[0] - 1e-15:
                best = (Z[i], j, thr, lv, rv)
        if best is None:
            break
        _, j, thr, lv, rv = best
        h = np.where(X[:, j] < thr, lv, rv)
        stumps.append((j, thr, lv, rv))
        w = w * np.exp(-y * h)
        w /= w.sum()
    return stumps


def predict(stumps, X):
    s = np.zeros(len(X))
    for j, thr, lv, rv in stumps:
        s += np.where(X[:, j] < thr, lv, rv)
    return np.where(s >= 0, 1, -1)


r = 1500.0
te = gen(20_000, r, "UMa", 2)
Xte = np.c_[te["tq_prev"] * Q, te["delta"]]
yte = np.where(te["label"], 1, -1)
for n_tr in (40_000,):
    tr = gen(n_tr, r, "UMa", 1)
    Xtr = np.c_[tr["tq_prev"] * Q, tr["delta"]]
    ytr = np.where(tr["label"], 1, -1)
    for rounds in (50, 100, 200):
        st = train_real_ada(Xtr, ytr, 5.0, rounds)
        pred = predict(st, Xte)
        tn = np.sum((pred == -1) & (yte == -1)); fp = np.sum((pred == 1) & (yte == -1))
        tp = np.sum((pred == 1) & (yte == 1)); fn = np.sum((pred == -1) & (yte == 1))
        print(f"real-ada n={n_tr} rounds={rounds}: p_TN={tn/(tn+fp):.4f} p_TP={tp/(tp+fn):.4f}")

# also check at larger radii + cross-model for robustness of this variant
for rr, tm in ((2500.0, "UMa"), (5000.0, "UMa")):
    trr = gen(40_000, rr, tm, 1)
    terr = gen(20_000, rr, tm, 2)
    st = train_real_ada(np.c_[trr["tq_prev"] * Q, trr["delta"]], np.where(trr["label"], 1, -1), 5.0, 100)
    pred = predict(st, np.c_[terr["tq_prev"] * Q, terr["delta"]])
    yy = np.where(terr["label"], 1, -1)
    tn = np.sum((pred == -1) & (yy == -1)); fp = np.sum((pred == 1) & (yy == -1))
    tp = np.sum((pred == 1) & (yy == 1)); fn = np.sum((pred == -1) & (yy == 1))
    print(f"real-ada r={rr}: p_TN={tn/(tn+fp):.4f} p_TP={tp/(tp+fn):.4f} p_FN={fn/(tp+fn):.4f}")
