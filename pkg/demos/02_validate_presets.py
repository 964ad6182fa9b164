# Validating storyforms and reading diagnostics.
#
# The bundled presets are all clean. Breaking one shows what the validator
# reports: a stable code, a severity, a path into the document and a message.

import dataclasses

from ncp import presets, validate
from ncp.model import Perspective

for name in presets.names():
    report = validate(presets.load(name))
    print(f"{name:20} valid={report.valid} diagnostics={len(report.diagnostics)}")

# Put cp on the same form as mc. Two perspectives now share a form and cp is
# no longer diagonal to mc.

s = presets.load("action-drama")
broken = dataclasses.replace(s, assignment=s.assignment.replace(cp=s.assignment[Perspective.MC]))
for d in validate(broken).diagnostics:
    print(d.render())

# Serotonin + Success + Good needs a "Centered" attunement.

m = presets.load("matrix-style")
drifting = dataclasses.replace(m, dynamics=dataclasses.replace(m.dynamics, attunement="Adrift"))
print(validate(drifting).codes())
