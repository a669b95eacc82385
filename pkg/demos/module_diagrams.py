"""
Writing modules as diagrams
===========================

"""

from kleinperm import decompose, format_label
from kleinperm.moddsl import ascii, lower, parse, render

source = """
module sample over gf2 {
  basis p q r s t;
  a: p -> r, q -> s;
  b: p -> s, q -> t;
}
"""

m = lower(parse(source))
print("summands:", [format_label(x) for x in decompose(m).labels])

# canonical text puts every summand in its catalogue shape
print(render(m, "sample"))

# and a picture: '/' is a, '\' is b
print(ascii(m))
