# Which perspective-to-form assignments are structurally sound?
#
# There are four perspectives (os, mc, cp, rs) and four conflict forms laid out
# on a 2x2 grid. That gives 4! = 24 bijections, and only some of them survive
# the diagonal rules. Let's count them.

import itertools

from ncp import ConflictForm, Perspective, PerspectiveAssignment, enumerate_valid_assignments, is_valid_assignment

forms = list(ConflictForm)
bijections = [PerspectiveAssignment(dict(zip(Perspective, perm))) for perm in itertools.permutations(forms)]
valid = [a for a in bijections if is_valid_assignment(a)]
print(f"{len(valid)} of {len(bijections)} bijections are valid")

# The library lists the same set in a fixed order (by OS form, then MC form).

assert enumerate_valid_assignments() == sorted(valid, key=lambda a: (a[Perspective.OS].rank, a[Perspective.MC].rank))

for a in enumerate_valid_assignments():
    print("  " + "  ".join(f"{p.code}={a[p].label}" for p in Perspective))

# Every form has a diagonal partner on the grid. mc and cp must sit on one
# diagonal, os and rs on the other.

for form in forms:
    partner = next(f for f in forms if f.home is form.home.diagonal)
    print(f"{form.label:>22} ({form.home.value}) <-> {partner.label} ({partner.home.value})")
