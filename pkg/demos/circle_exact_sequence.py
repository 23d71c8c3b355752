"""Exact-sequence derivation for maps into U(1) with a real structure.

Without extra input the long exact sequence of the pair (U(1), O(1)) leaves
an extension problem; a hint naming the answer resolves it.
"""

from rigidity.exactseq import Hint, derive_query

query = "pi0 (Omega^1 V_1(C^1))^Z2 [BDI]"
plain = derive_query(query)
print("\n".join(plain.trace_lines()))
print()
hinted = derive_query(query, hints=[Hint.parse("pair@level0=Z", provenance="known circle result")])
print("with hint:", hinted.result)
print("replay agrees:", hinted.report.replay().same_conclusions(hinted.report))
print()
print("V_2(C^3), real structure:", derive_query("pi0 (Omega^1 V_2(C^3))^Z2 [BDI]").result)
print("V_2(C^4), quaternionic, d=2:", derive_query("pi0 (Omega^2 V_2(C^4))^Z2 [CII]").result)
