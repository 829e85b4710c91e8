"""Consensus of equidistant trees through their ultrametrics."""

from troploc import consensus_run, parse_newick, write_newick
from troploc.phylo import absence_threshold, has_nesting, majority_threshold, tree_to_ultrametric

trees = [
    parse_newick("(((a:1,b:1):1,c:2):2,d:4);"),
    parse_newick("(((a:1,b:1):2,c:3):1,d:4);"),
    parse_newick("(((a:1,c:1):1,b:2):2,d:4);"),
    parse_newick("((a:2,b:2):2,(c:1,d:1):3);"),
]
for method in ("median", "center", "frechet", "fw_sym_regularized"):
    res = consensus_run(trees, method)
    print(f"{method:20s} {write_newick(res.tree)}")

n = 4
print(f"majority threshold {majority_threshold(n):.3f}, absence threshold {absence_threshold(n):.3f} for {n} taxa")
share = sum(has_nesting(tree_to_ultrametric(t), ["a", "b"], ["c"]) for t in trees) / len(trees)
out = consensus_run(trees, "median").ultrametric
print(f"{{a,b}} nested against {{c}} in {share:.0%} of inputs; in the median consensus: {has_nesting(out, ['a', 'b'], ['c'])}")
