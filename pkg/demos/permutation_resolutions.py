"""
Permutation resolutions and their lengths
=========================================

"""

from kleinperm import construct, decompose, format_label, parse_label, ppdim
from kleinperm.homalg import check_exact

# small modules already resolve in one step, larger ones need two
for text in ("M3", "M7", "M9", "W5", "W7", "E[t,2]", "E[t,3]"):
    r = ppdim(construct(parse_label(text)))
    terms = [" + ".join(format_label(x) for x in decompose(t).labels) for t in r.upper_witness.terms]
    print(f"{text:8} {r.describe():10} exact={check_exact(r.upper_witness).ok}  terms: {' | '.join(terms)}")

# for value two, the lower bound comes with a certificate on the Heller shift
cert = ppdim(construct(parse_label("W7"))).lower_certificate
print("certificate:", cert.to_dict())
