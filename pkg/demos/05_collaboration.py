# Two writers edit the same storyform.
#
# diff gives path-addressed changes, apply replays them, merge3 combines two
# edits against a common ancestor.

import dataclasses

from ncp import apply, diff, merge3, presets
from ncp.model import Outcome

base = presets.load("action-drama")
ours = dataclasses.replace(base, dynamics=dataclasses.replace(base.dynamics, outcome=Outcome.FAILURE))
theirs = dataclasses.replace(base, title="Action Drama (second draft)")

print(diff(base, ours).render(), end="")
assert apply(base, diff(base, ours)) == ours

result = merge3(base, ours, theirs)
print("clean:", result.clean, "| title:", result.merged.title, "| outcome:", result.merged.dynamics.outcome.value)

# When both sides touch the same leaf differently, the base value stays and a
# conflict is reported.

a = dataclasses.replace(base, dynamics=dataclasses.replace(base.dynamics, attunement="Torn"))
b = dataclasses.replace(base, dynamics=dataclasses.replace(base.dynamics, attunement="Adrift"))
for c in merge3(base, a, b).conflicts:
    print(c.render())
