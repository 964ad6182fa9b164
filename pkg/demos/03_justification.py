# Turning a storyform into an ordered beat sequence.
#
# Each of the four acts visits one signpost per perspective. Dynamics decide the
# order of perspectives inside an act and the direction each one walks its quad.

import dataclasses

from ncp import justify, presets
from ncp.model import Alignment, Resolve

s = presets.load("action-drama")
for b in justify(s):
    print(f"{b.index:>2}  {str(b.path):8} {b.phase.value:22} {b.resolution_kind.value if b.resolution_kind else ''}")

# Flip the alignment. The perspective order inside every act reverses.

flipped = dataclasses.replace(s, dynamics=dataclasses.replace(s.dynamics, alignment=Alignment.SEROTONIN))
print([str(b.path) for b in justify(s)[:4]])
print([str(b.path) for b in justify(flipped)[:4]])

# Relinquished under Serotonin resolves as Released. Maintained always Holds.

print(justify(flipped)[-1].resolution_kind)
held = dataclasses.replace(s, dynamics=dataclasses.replace(s.dynamics, resolve=Resolve.MAINTAINED))
print(justify(held)[-1].resolution_kind)

# Expanding a signpost into its own quad adds four sub-beats right after it.

from ncp.model import Perspective, Quad, StorypointNode

root = s.storypoints[Perspective.MC]
tl = dataclasses.replace(root.quad.tl, quad=Quad(*(StorypointNode(t) for t in ("a boast", "a dare", "a fall", "a grudge"))))
deeper = dataclasses.replace(s, storypoints={**s.storypoints, Perspective.MC: dataclasses.replace(root, quad=dataclasses.replace(root.quad, tl=tl))})
beats = justify(deeper)
print(len(justify(s)), "beats at depth 1,", len(beats), "with one signpost expanded")
print([str(b.path) for b in beats if b.perspective is Perspective.MC][:5])
