"""Build a few plateaued functions and look at their exact spectra.

    python demos/quickstart.py
"""

from __future__ import annotations

import numpy as np

from genplateau import FieldCtx, GenFunction, SpaceDesc, classify, walsh_transform
from genplateau.builders import MMBentSpec, mm_genbent

# A quadratic on F_3^2.  x^2 + y^2 is bent; its sign is -1 because
# (i sqrt 3)^2 = -3.
V = SpaceDesc.vector(3, 2)
x, y = V.variables()
f = GenFunction(V, 1, (x * x + y * y) % 3)
rep = classify(f)
print(f"x^2 + y^2 on F_3^2: {rep.s}-plateaued, {rep.regularity}, mu = {set(rep.mu_labels())}")

# Walsh values are cyclotomic integers, so norms come out as exact integers.
spec = walsh_transform(f)
print("W(0) =", spec[0], " |W(0)|^2 =", int(spec.norms()[:1][0]))

# Dropping a variable leaves y^2 alone: one plateau step up, support of size 3.
g = GenFunction(V, 1, (y * y) % 3)
rep = classify(g)
print("y^2 on F_3^2: s =", rep.s, "support =", rep.support_coords().tolist())

# A Maiorana-McFarland bent function into Z_9 over F_9 x F_9; the builder
# checks its closed-form dual against the spectrum before returning.
ctx = FieldCtx(3, 2, (1, 2, 2))
h, dual = mm_genbent(MMBentSpec(ctx, alpha="z", pi=5, g="Tr(x**2)", k=2))
rep = classify(h)
print("MM bent over Z_9:", rep.regularity, "dual agrees:", bool(np.array_equal(rep.dual, dual.table)))
