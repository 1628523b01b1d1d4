"""Quick feasibility check for acceptance criteria 5 & 6 under the parametric channel.

Channel: mean rsrp = tx - beta - 10k log10(d), shadowing N(0, sigma_sh) iid per location,
measurement error N(0, (base + dopp*v)/sqrt(n_sf)) per location.
Validator features: (deq(tau_prev), delta_p). Predictor features: (tau_prev, P_curr).
"""
import numpy as np
from sklearn.ensemble import AdaBoostClassifier, GradientBoostingRegressor
from sklearn.tree import DecisionTreeClassifier

C = 299792458.0
TAU = 0.52e-6
Q = 2 * C * TAU
DPER = 702.0
TX = 46.0
DMIN = 10.0

MODELS = {"UMi": (3.6, 7.8, 21.4), "UMa": (3.9, 6.0, 12.6), "RMa": (3.0, 8.0, 15.0)}


def gen(n, r_cell, model, seed, base=1.0, dopp=0.01, nsf=4):
    k, ssh, beta = MODELS[model]
    rng = np.random.default_rng(seed)
    dp = rng.uniform(0, r_cell, n)
    dc = rng.uniform(0, r_cell, n)
    v = rng.uniform(0, 120, n)
    sig_m = (base + dopp * v) / np.sqrt(nsf)
    def meas(d):
        mu = TX - beta - 10 * k * np.log10(np.maximum(d, DMIN))
        return mu + rng.normal(0, ssh, n) + rng.normal(0, 1, n) * sig_m
    p_prev = meas(dp)
    p_curr = meas(dc)
    delta = p_prev - p_curr
    tq_prev = np.floor(dp / Q)
    label = (np.abs(dc - dp) <= DPER)  # True = valid
    return dict(dp=dp, dc=dc, v=v, p_prev=p_prev, p_curr=p_curr, delta=delta,
                tq_prev=tq_prev, label=label, k=k)


def validator_check(r_cell, train_model="UMa", test_model="UMa", n_tr=40000, n_te=20000):
    tr = gen(n_tr, r_cell, train_model, 1)
    te = gen(n_te, r_cell, test_model, 2)
    k_train = MODELS[train_model][0]
    k_sys = MODELS[test_model][0]
    Xtr = np.c_[tr["tq_prev"] * Q, tr["delta"]]
    ytr = np.where(tr["label"], 1, -1)
    Xte = np.c_[te["tq_prev"] * Q, te["delta"] * (k_train / k_sys)]
    yte = np.where(te["label"], 1, -1)
    w = np.where(ytr == -1, 5.0, 1.0)
    clf = AdaBoostClassifier(estimator=DecisionTreeClassifier(max_depth=1),
                             n_estimators=100, algorithm="SAMME", random_state=0)
    clf.fit(Xtr, ytr, sample_weight=w)
    pred = clf.predict(Xte)
    tn = np.sum((pred == -1) & (yte == -1)); fp = np.sum((pred == 1) & (yte == -1))
    tp = np.sum((pred == 1) & (yte == 1)); fn = np.sum((pred == -1) & (yte == 1))
    p_tn = tn / (tn + fp); p_tp = tp / (tp + fn); p_fn = fn / (tp + fn)
    return p_tn, p_tp, p_fn


def predictor_check(r_cell, train_model="UMa", test_model="UMa", n_tr=40000, n_te=20000):
    tr = gen(n_tr, r_cell, train_model, 3)
    te = gen(n_te, r_cell, test_model, 4)
    k_train = MODELS[train_model][0]
    k_sys = MODELS[test_model][0]
    s = k_train / k_sys
    Xtr = np.c_[tr["tq_prev"], tr["p_curr"]]
    Xte = np.c_[te["tq_prev"], te["p_curr"] * s]
    reg = GradientBoostingRegressor(max_depth=1, n_estimators=200, learning_rate=0.1,
                                    random_state=0)
    reg.fit(Xtr, tr["dc"])
    dhat = np.clip(reg.predict(Xte), 0, r_cell)
    tq_hat = np.floor(dhat / Q + 1e-6)
    d_used = tq_hat * Q
    eta = np.mean(np.abs(te["dc"] - d_used) <= DPER)
    eta_raw = np.mean(np.abs(te["dc"] - dhat) <= DPER)
    return eta, eta_raw


for r in (1500.0, 2500.0, 5000.0):
    ptn, ptp, pfn = validator_check(r)
    eta, eta_raw = predictor_check(r)
    pf_stap = 1 - eta
    line = f"r={r:6.0f}  adaboost p_TN={ptn:.3f} p_TP={ptp:.3f} p_FN={pfn:.3f}  eta={eta:.3f} (raw {eta_raw:.3f})  pf_sTAP={pf_stap:.3f}"
    for p in (0.25, 0.5, 0.75):
        pf_stav = p + (1 - p) * pfn
        line += f"  [p={p}: stav={pf_stav:.3f} {'OK' if pf_stap < pf_stav else 'VIOLATION'}]"
    print(line)

print("\ncross-model (train UMa):")
for r, tm in ((1500.0, "UMi"), (2500.0, "UMi"), (5000.0, "RMa")):
    ptn_same, ptp_same, _ = validator_check(r, tm, tm)
    ptn_x, ptp_x, _ = validator_check(r, "UMa", tm)
    print(f"r={r:6.0f} test={tm}: same p_TN={ptn_same:.3f} cross p_TN={ptn_x:.3f} "
          f"delta={(ptn_same-ptn_x)*100:.1f}pp  ptp same/cross {ptp_same:.3f}/{ptp_x:.3f}")
