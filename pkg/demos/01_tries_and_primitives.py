"""Build a plain binary trie and ask it the usual set questions."""

from trieset import build

S = [1, 3, 7, 8, 9, 10, 11, 12]
u = 16

t = build(S, u, last_level_rank=True, select=True)

# one bit vector per level, two bits per node (left child, right child)
for depth, bits in enumerate(t.level_strings(), 1):
    print(f"level {depth}: {' '.join(bits[i:i + 2] for i in range(0, len(bits), 2))}")

print("edges (one-bits):", t.one_bits)
print("payload bits:", t.payload_bits, "= 2 * (edges - n + 1) =", 2 * (t.one_bits - t.n + 1))
print("directory bits:", t.directory_bits)

print("rank(9) =", t.rank(9))            # elements <= 9
print("select(3) =", t.select(3))        # third smallest
print("successor(4) =", t.successor(4))
print("predecessor(6) =", t.predecessor(6))
print("predecessor(0) =", t.predecessor(0))
print("decoded:", t.decode().tolist())

# the wire format is self-describing; directories are rebuilt on load
data = t.to_bytes()
print(len(data), "bytes serialized, header", data[:4])
