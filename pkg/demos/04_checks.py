"""
Running the lemma suite
=======================

Every operator inequality the coding theorems rest on, evaluated on random
instances.  The margin is the slack: negative beyond 1e-9 is a failure.
"""

from unipriv import verify

for result in verify.run_suite(seed=0):
    print(result.line())
