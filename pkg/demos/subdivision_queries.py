"""
Face and incidence queries on a map-like subdivision
====================================================

A grid with random edges knocked out behaves like a cadastral map with
irregular parcels. Faces are parcels, nodes are corners.
"""

from topoplan import BuildOptions, TopoIndex
from topoplan.generate import random_deletion

rs = random_deletion(30, 30, 0.4, seed=3)
index = TopoIndex.build(rs, BuildOptions(heavy_pairs=True, with_witness=True, f_hp=12))
print(f"{index.n} corners, {index.m} boundary segments, {index.nfaces} parcels")

# biggest parcel (face 1 is the unbounded outside)
sizes = {x: index.count_face(x, "nodes", distinct=True) for x in range(2, index.nfaces + 1)}
big = max(sizes, key=sizes.get)
print("largest parcel", big, "has", sizes[big], "corners")

touching = sorted(set(index.list_face_faces(big)) - {big})
print("parcels sharing a boundary with it:", touching[:10], "..." if len(touching) > 10 else "")
y = touching[0]
e = index.separating_edge(big, y)
print(f"parcel {big} and {y} are separated by segment {e} between corners {index.edge_endpoints(e)}")

# parcels that only meet at a corner
corner_only = [z for z in range(2, index.nfaces + 1)
               if z != big and not index.faces_adjacent(big, z) and index.faces_share_node(big, z)[0]]
print("parcels touching only at a corner:", corner_only[:5])

u = next(iter(index.list_face_nodes(big)))
print("corner", u, "lies on parcels", sorted(set(index.list_node_faces(u))))
print("corner", u, "on parcel", big, "->", index.node_on_face(u, big))
