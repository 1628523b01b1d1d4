"""Cost-5 Bayes operating point for the validator at r=1500 under UMa defaults,
plus AdaBoost round-count sensitivity."""
import numpy as np
from sklearn.ensemble import AdaBoostClassifier
from sklearn.tree import DecisionTreeClassifier
from feasibility import gen, Q

r = 1500.0

# Nonparametric cost-weighted Bayes estimate on a fine grid
big = gen(2_000_000, r, "UMa", 11)
x1 = big["tq_prev"] * Q
x2 = big["delta"]
lab = big["label"]
b1 = np.linspace(0, r, 40)
b2 = np.linspace(-45, 45, 120)
i1 = np.clip(np.digitize(x1, b1) - 1, 0, len(b1) - 2)
i2 = np.clip(np.digitize(x2, b2) - 1, 0, len(b2) - 2)
flat = i1 * (len(b2) - 1) + i2
nv = np.bincount(flat[lab], minlength=(len(b1) - 1) * (len(b2) - 1)).astype(float)
ni = np.bincount(flat[~lab], minlength=(len(b1) - 1) * (len(b2) - 1)).astype(float)
# decision per cell: invalid iff 5*P(inv) > P(valid)
decide_invalid = 5 * ni > nv
te = gen(200_000, r, "UMa", 12)
j1 = np.clip(np.digitize(te["tq_prev"] * Q, b1) - 1, 0, len(b1) - 2)
j2 = np.clip(np.digitize(te["delta"], b2) - 1, 0, len(b2) - 2)
dec_inv = decide_invalid[j1 * (len(b2) - 1) + j2]
lv = te["label"]
p_tn = np.mean(dec_inv[~lv]); p_tp = np.mean(~dec_inv[lv])
print(f"cost-5 Bayes-grid: p_TN={p_tn:.4f}  p_TP={p_tp:.4f}")

# AdaBoost with more rounds
tr = gen(40_000, r, "UMa", 1)
te = gen(20_000, r, "UMa", 2)
Xtr = np.c_[tr["tq_prev"] * Q, tr["delta"]]
ytr = np.where(tr["label"], 1, -1)
Xte = np.c_[te["tq_prev"] * Q, te["delta"]]
yte = np.where(te["label"], 1, -1)
w = np.where(ytr == -1, 5.0, 1.0)
for rounds in (100, 200, 400):
    clf = AdaBoostClassifier(estimator=DecisionTreeClassifier(max_depth=1),
                             n_estimators=rounds, random_state=0)
    clf.fit(Xtr, ytr, sample_weight=w)
    pred = clf.predict(Xte)
    tn = np.sum((pred == -1) & (yte == -1)); fp = np.sum((pred == 1) & (yte == -1))
    tp = np.sum((pred == 1) & (yte == 1)); fn = np.sum((pred == -1) & (yte == 1))
    print(f"rounds={rounds}: p_TN={tn/(tn+fp):.4f} p_TP={tp/(tp+fn):.4f}")

# cost ratio sensitivity at 100 rounds
for cr in (5.0, 6.0, 8.0):
    w = np.where(ytr == -1, cr, 1.0)
    clf = AdaBoostClassifier(estimator=DecisionTreeClassifier(max_depth=1),
                             n_estimators=100, random_state=0)
    clf.fit(Xtr, ytr, sample_weight=w)
    pred = clf.predict(Xte)
    tn = np.sum((pred == -1) & (yte == -1)); fp = np.sum((pred == 1) & (yte == -1))
    tp = np.sum((pred == 1) & (yte == 1)); fn = np.sum((pred == -1) & (yte == 1))
    print(f"cost={cr}: p_TN={tn/(tn+fp):.4f} p_TP={tp/(tp+fn):.4f}")
