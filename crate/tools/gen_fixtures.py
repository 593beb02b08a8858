import json, re, itertools, os

def names(amb):
    k = amb["kind"]
    if k == "ProjectivePlane": return ["H"]
    if k == "ProductOfSpheres": return ["f1", "f2"]
    if k == "RationalBlowup": return ["H"] + [f"E{i}" for i in range(1, amb["n"] + 1)]
    if k == "RuledTrivial": return ["B", "F"] + [f"E{i}" for i in range(1, amb["n"] + 1)]

def gram(amb, i, j):
    k = amb["kind"]
    if k == "ProjectivePlane": return 1
    if k == "ProductOfSpheres": return 0 if i == j else 1
    if k == "RationalBlowup": return (1 if i == 0 else -1) if i == j else 0
    if k == "RuledTrivial":
        if {i, j} == {0, 1}: return 1
        if i == j and i >= 2: return -1
        return 0

def parse(amb, text):
    ns = names(amb); v = [0] * len(ns)
    for sign, coef, name in re.findall(r"([+-]?)(\d*)([A-Za-z]+\d*)", text):
        c = int(coef) if coef else 1
        v[ns.index(name)] += -c if sign == "-" else c
    return v

def pair(amb, a, b):
    return sum(a[i] * b[j] * gram(amb, i, j) for i in range(len(a)) for j in range(len(b)))

def config(amb, comps, areas=None, genus=None):
    edges = []
    for (ia, ca), (ib, cb) in itertools.combinations(comps, 2):
        m = pair(amb, parse(amb, ca), parse(amb, cb))
        if m > 0:
            a, b = sorted([ia, ib])
            e = {"a": a, "b": b}
            if m > 1: e["multiplicity"] = m
            edges.append(e)
    edges.sort(key=lambda e: (e["a"], e["b"]))
    doc = {"schema": "sympdiv/config/v1", "ambient": amb,
           "components": [dict({"id": i, "class": c}, **({"genus": genus[i]} if genus and i in genus else {})) for i, c in comps],
           "edges": edges}
    if areas is not None: doc["areas"] = areas
    return doc

def write(name, doc):
    with open(f"fixtures/{name}.json", "w") as f:
        json.dump(doc, f, indent=2, ensure_ascii=False); f.write("\n")

cp2n = lambda n: {"kind": "RationalBlowup", "n": n}
decay = lambda n: ["1"] + [f"1/{10**i}" for i in range(1, n + 1)]

write("cusp_8_3", config(cp2n(13), [
    ("D1", "E3-E5-E7-E12"), ("C12", "E12"), ("C5", "E5-E6-E12"), ("C6", "E6"),
    ("D2", "E2-E3-E5-E6"), ("D3", "2H-E1-E2-E4-E8"), ("D4", "H-E1"),
    ("D5", "E1-E2-E3-E7-E9"), ("C9", "E9-E10"), ("C10", "E10-E11"), ("C11", "E11")], decay(13)))

write("quasi_minimal_first_kind", config(cp2n(8), [
    ("Q", "2H-E1-E2-E3-E6-E7-E8"), ("L", "H-E1-E4-E8"), ("T1", "E1-E2-E5"), ("T2", "E2-E3"), ("T3", "E3")], decay(8)))

write("quasi_minimal_second_kind", config(cp2n(4), [
    ("L1", "H-E1-E4"), ("L2", "H-E2-E4"), ("L3", "H-E3-E4"), ("C", "E4")], decay(4)))

ruled = {"kind": "RuledTrivial", "g": 1, "n": 11}
write("ruled_comb", config(ruled, [
    ("S", "B-2F-E5"), ("A1", "F-E1-E2"), ("A2", "E1-E3"), ("A3", "E2-E4"),
    ("C0", "E5-E7"), ("C1", "F-E5-E6"), ("G1", "F-E8"), ("G2", "E8-E9-E10"), ("G3", "E9"), ("G4", "F-E11")],
    ["3", "1"] + [f"1/{10**i}" for i in range(1, 12)]))

write("hypothesis_fail", config({"kind": "ProjectivePlane"}, [("C", "3H")], ["1"]))

bad = config({"kind": "ProjectivePlane"}, [("L1", "H"), ("L2", "H"), ("L3", "H")], ["1"])
bad["edges"] = [{"a": "L1", "b": "L2"}, {"a": "L2", "b": "L3"}]
write("edge_mismatch", bad)

bad = config({"kind": "ProjectivePlane"}, [("L1", "H"), ("L2", "H")], ["1/0"])
write("malformed_rational", bad)

p2 = {"kind": "ProjectivePlane"}; s2 = {"kind": "ProductOfSpheres"}; c1 = cp2n(1)
def comps(cl): return [(f"D{i+1}", c) for i, c in enumerate(cl)]
cases = [
    ("A1", p2, ["H", "2H"], None), ("A2", p2, ["H", "H", "H"], None),
    ("B1", s2, ["f1+f2", "f1+f2"], 1), ("B2", s2, ["f2", "f1", "f1+f2"], 0), ("B3", s2, ["f2", "f1", "f2", "f1"], 0),
    ("C1", c1, ["H", "2H-E1"], 0), ("C2", c1, ["2H-E1", "H-E1", "E1"], 1), ("C3", c1, ["H", "H-E1", "E1", "H-E1"], 0),
    ("A1'", p2, ["H"], None), ("A2'", p2, ["H", "H"], None), ("A3'", p2, ["2H"], None),
    ("B1'", s2, ["f1", "f2", "f2"], 0), ("B2'", s2, ["f1+f2", "f2", "f1-f2"], 1), ("B3'", s2, ["f1+2f2", "f1-f2"], 1),
    ("C1'", c1, ["H", "H-E1", "H-E1"], 0), ("C2'", c1, ["H", "H-E1", "E1"], 0), ("C3'", c1, ["2H-E1", "E1"], 1),
]
near = [
    ("two lines and a cubic", p2, ["H", "H", "3H"]), ("two conics", p2, ["2H", "2H"]), ("four lines", p2, ["H", "H", "H", "H"]),
    ("cubic", p2, ["3H"]), ("two lines and a conic", p2, ["H", "H", "2H"]), ("quartic", p2, ["4H"]),
    ("line and cubic", p2, ["H", "3H"]), ("line and quartic", p2, ["H", "4H"]),
    ("three bisections", s2, ["f1+f2", "f1+f2", "f1+f2"]), ("B2 with 2f2", s2, ["f2", "f1", "f1+2f2"]),
    ("pentagon", s2, ["f2", "f1", "f2", "f1", "f2"]), ("bidegree (2,2)", s2, ["2f1+2f2"]),
    ("B3' off by one", s2, ["f1+2f2", "f1-2f2"]), ("two (1,1) and a fiber", s2, ["f1+f2", "f1+f2", "f1"]),
    ("C1 off", c1, ["H", "3H-2E1"]), ("C3 with extra fiber", c1, ["H", "H-E1", "E1", "H-E1", "H-E1"]),
    ("C2 off", c1, ["3H-E1", "H-E1", "E1"]), ("section and two exceptional", c1, ["2H-E1", "E1", "3H-E1"]),
    ("two sections", c1, ["2H-E1", "2H-E1"]), ("C3' off", c1, ["3H-E1", "E1"]),
]
mm = {"cases": [{"name": n, "case": n, "k": k, "config": config(a, comps(cl))} for n, a, cl, k in cases],
      "near_misses": [{"name": n, "config": config(a, comps(cl))} for n, a, cl in near]}
write("minimal_models", mm)
