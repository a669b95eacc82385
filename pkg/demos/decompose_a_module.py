"""
Recovering the summands of a scrambled module
=============================================

"""

import random

from kleinperm import construct, decompose, direct_sum, format_label, parse_label
from kleinperm.exactmat import ExactMatrix, inverse
from kleinperm.kv4mod import KV4Module

# glue three catalogue modules together
parts = [construct(parse_label(x)) for x in ("M5", "E[t^2+t+1,1]", "kV4")]
m, _, _ = direct_sum(parts)
print("dimension", m.dim)

# hide the block structure behind a random change of basis
rng = random.Random(1)
while True:
    T = ExactMatrix.from_lists(m.field, [[rng.randrange(2) for _ in range(m.dim)] for _ in range(m.dim)])
    if T.rank == m.dim:
        break
Ti = inverse(T)
hidden = KV4Module(m.field, Ti @ m.A @ T, Ti @ m.B @ T)

# decomposition finds the summands again
d = decompose(hidden)
print("summands:", " + ".join(format_label(x) for x in d.labels))

# the change of basis puts both actions in block form
C, B = d.change_of_basis, d.basis
print("block form for a:", C @ hidden.A @ B == direct_sum([construct(x) for x in d.labels])[0].A)
