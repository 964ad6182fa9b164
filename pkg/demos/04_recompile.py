# Changing course mid-story.
#
# recompile keeps every beat before the cut untouched, applies a deviation and
# re-derives the rest. If the deviation breaks the assignment, the nearest valid
# one is chosen instead.

from ncp import Deviation, presets, recompile, validate
from ncp.model import Perspective

s = presets.load("action-drama")
d = Deviation.parse(["dynamics.resolve=maintained", "perspectives.cp=external_framing"])
out = recompile(s, 8, d)

# Moving cp onto mc's form is not allowed, and the closest valid assignment
# here is simply the original one.

assert out.beats[:8] == s.beats[:8]
print("assignment before:", {p.code: s.assignment[p].value for p in Perspective})
print("assignment after: ", {p.code: out.assignment[p].value for p in Perspective})
print("errors:", [e.code for e in validate(out).errors])

for b in out.beats[6:]:
    print(f"{b.index:>2}  {str(b.path):8} {b.phase.value}")
