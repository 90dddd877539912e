"""Fit a latent smoking model whose observed joint is exactly the example joint.

Joint over (S, T, C), first variable most significant:
    0.5, 0.1, 0.01, 0.02, 0.1, 0.05, 0.02, 0.2

Construction: the hidden H is a copy of S (s = identity), so
    h(H)       = P(S = H)
    t(T | S)   = P(T | S)
    c(C | T,H) = P(C | T, S = H)
and evaluating H -> S, S -> T, (T, H) -> C then summing H returns the joint.

Run from this directory: python3 derive_smoking_model.py > smoking_model.json
"""

import json
import re
from fractions import Fraction as F
from itertools import product

OMEGA = [F(x) for x in ("0.5", "0.1", "0.01", "0.02", "0.1", "0.05", "0.02", "0.2")]


def p(s, t, c):
    return OMEGA[s * 4 + t * 2 + c]


ps = [sum(p(s, t, c) for t, c in product(range(2), repeat=2)) for s in range(2)]
pst = {(s, t): p(s, t, 0) + p(s, t, 1) for s, t in product(range(2), repeat=2)}

h = [[ps[0], ps[1]]]
s_cpt = [[F(1), F(0)], [F(0), F(1)]]
t_cpt = [[pst[s, 0] / ps[s], pst[s, 1] / ps[s]] for s in range(2)]
# Columns of c over parents (T, H) in declaration order: index t * 2 + h.
c_cpt = [[p(hh, t, 0) / pst[hh, t], p(hh, t, 1) / pst[hh, t]] for t, hh in product(range(2), repeat=2)]

# Check the fit exactly.
for s, t, c in product(range(2), repeat=3):
    total = sum(h[0][hh] * s_cpt[hh][s] * t_cpt[s][t] * c_cpt[t * 2 + hh][c] for hh in range(2))
    assert total == p(s, t, c)


def floats(table):
    return [[float(x) for x in col] for col in table]


model = {
    "variables": [
        {"name": "S", "cardinality": 2, "latent": False},
        {"name": "T", "cardinality": 2, "latent": False},
        {"name": "C", "cardinality": 2, "latent": False},
        {"name": "H", "cardinality": 2, "latent": True},
    ],
    "edges": [["H", "S"], ["S", "T"], ["T", "C"], ["H", "C"]],
    "cpts": {"H": floats(h), "S": floats(s_cpt), "T": floats(t_cpt), "C": floats(c_cpt)},
}
text = json.dumps(model, indent=2)
# Keep innermost lists and variable records on one line.
text = re.sub(r"\[\s+([^\[\]{}]*?)\s+\]", lambda m: "[" + re.sub(r"\s*\n\s*", " ", m.group(1)) + "]", text)
text = re.sub(r"\{\s+([^\[\]{}]*?)\s+\}", lambda m: "{" + re.sub(r"\s*\n\s*", " ", m.group(1)) + "}", text)
print(text)
