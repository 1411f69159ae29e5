class UnionFind(object):
    """Disjoint sets over integer labels, grown on demand.

    Unions keep the smaller label as root, so ``find`` of any member of a set
    returns the label first assigned to that set in raster order.
    """

    def __init__(self, size=0):
        self.parent = list(range(size))

    def make_set(self):
        label = len(self.parent)
        self.parent.append(label)
        return label

    def find(self, x):
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        # path compression
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return ra
        if rb < ra:
            ra, rb = rb, ra
        self.parent[rb] = ra
        return ra

    def __len__(self):
        return len(self.parent)
