"""Prototype of the exact discrete AdaBoost I plan to implement in C++:
stump = argmin weighted 0-1 error over midpoint thresholds, cost-5 initial weights."""
import numpy as np
from feasibility import gen, Q


def best_stump(X, y, w):
    n, f = X.shape
    best = (1e18, -1, 0.0, 1, -1)  # err, feat, thr, left, right
    for j in range(f):
        order = np.argsort(X[:, j], kind="stable")
        xs = X[order, j]; ys = y[order]; ws = w[order]
        wp = np.where(ys > 0, ws, 0).cumsum()
        wn = np.where(ys < 0, ws, 0).cumsum()
        WP, WN = wp[-1], wn[-1]
        distinct = np.nonzero(np.diff(xs) > 0)[0]  # split after index i
        if len(distinct) == 0:
            continue
        # polarity A: left=-1,right=+1  -> err = wp_left + (WN - wn_left)
        errA = wp[distinct] + (WN - wn[distinct])
        # polarity B: left=+1,right=-1 -> err = wn_left + (WP - wp_left)
        errB = wn[distinct] + (WP - wp[distinct])
        for errs, lv, rv in ((errA, -1, 1), (errB, 1, -1)):
            i = np.argmin(errs)
            e = errs[i]
            thr = 0.5 * (xs[distinct[i]] + xs[distinct[i] + 1])
            cand = (e, j, thr, lv, rv)
            if e < best[0] - 1e-15:
                best = cand
    return best


def train_ada(X, y, cost, rounds):
    n = len(y)
    w = np.where(y < 0, cost, 1.0)
    w = w / w.sum()
    stumps = []
    for m in range(rounds):
        e, j, thr, lv, rv = best_stump(X, y, w)
        if e >= 0.5:
            break
        e = max(e, 1e-12)
        alpha = 0.5 * np.log((1 - e) / e)
        h = np.where(X[:, j] < thr, lv, rv)
        stumps.append((j, thr, lv, rv, alpha))
        w = w * np.exp(-alpha * y * h)
        w = w / w.sum()
        if e <= 1e-12:
            break
    return stumps


def predict_ada(stumps, X):
    s = np.zeros(len(X))
    for j, thr, lv, rv, a in stumps:
        s += a * np.where(X[:, j] < thr, lv, rv)
    return np.where(s >= 0, 1, -1)


r = 1500.0
te = gen(20_000, r, "UMa", 2)
Xte = np.c_[te["tq_prev"] * Q, te["delta"]]
yte = np.where(te["label"], 1, -1)
for n_tr in (40_000, 100_000):
    tr = gen(n_tr, r, "UMa", 1)
    Xtr = np.c_[tr["tq_prev"] * Q, tr["delta"]]
    ytr = np.where(tr["label"], 1, -1)
    for rounds in (50, 100, 200):
        st = train_ada(Xtr, ytr, 5.0, rounds)
        pred = predict_ada(st, Xte)
        tn = np.sum((pred == -1) & (yte == -1)); fp = np.sum((pred == 1) & (yte == -1))
        tp = np.sum((pred == 1) & (yte == 1)); fn = np.sum((pred == -1) & (yte == 1))
        print(f"n={n_tr} rounds={rounds} (used {len(st)}): p_TN={tn/(tn+fp):.4f} p_TP={tp/(tp+fn):.4f}")
