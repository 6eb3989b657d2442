"""Partition instances become star tours.

The values become leaves at distance and weight s_i, plus one leaf of size
s_max, around a heavy start node.  The rate is 0 up to half the sum, 1 up to
sum + s_max, and infinite beyond.  A tour of cost at most sum + s_max exists
exactly when the values split evenly.
"""

from wtsp import check_threshold, reduce_partition

red = reduce_partition((1, 1, 2))
print(red.instance.to_json(indent=1))

for values in [(1, 1, 2), (1, 2), (2, 2), (3, 3), (2, 3, 7), (4, 5, 6, 7)]:
    res = check_threshold(values)
    print(f"{values!s:14} partitionable={res.partitionable!s:5}  "
          f"optimum {res.optimum:>4}  threshold {res.threshold}")
