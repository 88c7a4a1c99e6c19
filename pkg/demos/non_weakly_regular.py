"""A bent function that is not weakly regular and lies outside the GMM class.

The corpus example 9 is an indirect sum over F_81 x F_9^2.  This script
rebuilds it, predicts its dual and sign from the pieces, and runs the line
test that rules out a completed generalized Maiorana-McFarland form.

    python demos/non_weakly_regular.py
"""

from __future__ import annotations

from collections import Counter

from genplateau import build, load
from genplateau.analysis import gmm_line_obstruction
from genplateau.builders import corollary2_dual_and_regularity
from genplateau.corpus import params_path

res = build(load(params_path(9)))
h, rep = res.f, res.report
print(f"h: {h.space.size} points, s = {rep.s}, {rep.regularity}")
print("sign counts:", dict(Counter(rep.mu_labels())))

h_star, pred = corollary2_dual_and_regularity(res.extra["spec"], h)
print("closed-form dual matches the spectrum; conditions that force non-weak regularity:", pred["conditions"])

lines = gmm_line_obstruction(h)
print(f"{lines['lines_checked']} lines checked, surviving: {len(lines['surviving_lines'])}")
print("outside the completed GMM class" if lines["obstructed"] else "inconclusive")
