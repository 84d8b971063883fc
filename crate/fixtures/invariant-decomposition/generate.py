#!/usr/bin/env python3
"""Regenerates the decomposed-invariant sources and expectations.

Each family lists its property methods together with the labels each one
covers, worked out by reading the method body. An invariant `inv_<digits>`
conjoins the properties named by its digits; its covered set is the union
of theirs.
"""

import itertools
import json
import pathlib

HERE = pathlib.Path(__file__).parent

FAMILIES = [
    {
        "name": "SinglyLinkedList",
        "body": """    Entry header;
    int size;

    static class Entry {
        Object element;
        Entry next;
    }

    boolean sizeOk() {
        int n = 0;
        Entry e = header;
        while (e != null) {
            n++;
            e = e.next;
        }
        return n == size;
    }

    boolean headerOk() {
        return size == 0 || header != null;
    }

    boolean elementsOk() {
        for (Entry e = header; e != null; e = e.next) {
            if (e.element == null) {
                return false;
            }
        }
        return true;
    }
""",
        "props": [
            ("sizeOk", ["SinglyLinkedList.header", "SinglyLinkedList.size", "SinglyLinkedList.Entry.next", "SinglyLinkedList.Entry.next+"]),
            ("headerOk", ["SinglyLinkedList.header", "SinglyLinkedList.size"]),
            ("elementsOk", ["SinglyLinkedList.header", "SinglyLinkedList.Entry.element", "SinglyLinkedList.Entry.element+",
                            "SinglyLinkedList.Entry.next", "SinglyLinkedList.Entry.next+"]),
        ],
        "graph": {
            "nodes": [
                ("Object", "unresolved"),
                ("SinglyLinkedList", "class"),
                ("SinglyLinkedList.Entry", "class"),
                ("int", "primitive"),
            ],
            "edges": [
                ("SinglyLinkedList", "SinglyLinkedList.Entry", "header", "SinglyLinkedList", False),
                ("SinglyLinkedList", "int", "size", "SinglyLinkedList", False),
                ("SinglyLinkedList.Entry", "Object", "element", "SinglyLinkedList.Entry", True),
                ("SinglyLinkedList.Entry", "SinglyLinkedList.Entry", "next", "SinglyLinkedList.Entry", True),
            ],
        },
    },
    {
        "name": "SortedList",
        "body": """    Node head;
    int size;

    static class Node {
        int value;
        Node next;
    }

    boolean sortedOk() {
        for (Node n = head; n != null && n.next != null; n = n.next) {
            if (n.value > n.next.value) {
                return false;
            }
        }
        return true;
    }

    boolean sizeOk() {
        int count = 0;
        Node n = head;
        while (n != null) {
            count++;
            n = n.next;
        }
        return count == size;
    }

    boolean sizeNonNegative() {
        return size >= 0;
    }

    boolean headOk() {
        return size == 0 ? head == null : head != null;
    }
""",
        "props": [
            ("sortedOk", ["SortedList.head", "SortedList.Node.next", "SortedList.Node.next+", "SortedList.Node.value", "SortedList.Node.value+"]),
            ("sizeOk", ["SortedList.head", "SortedList.size", "SortedList.Node.next", "SortedList.Node.next+"]),
            ("sizeNonNegative", ["SortedList.size"]),
            ("headOk", ["SortedList.head", "SortedList.size"]),
        ],
        "graph": {
            "nodes": [
                ("SortedList", "class"),
                ("SortedList.Node", "class"),
                ("int", "primitive"),
            ],
            "edges": [
                ("SortedList", "SortedList.Node", "head", "SortedList", False),
                ("SortedList", "int", "size", "SortedList", False),
                ("SortedList.Node", "SortedList.Node", "next", "SortedList.Node", True),
                ("SortedList.Node", "int", "value", "SortedList.Node", True),
            ],
        },
    },
    {
        "name": "BinaryTree",
        "body": """    Node root;
    int size;

    static class Node {
        int key;
        Node left;
        Node right;
    }

    boolean rootOk() {
        return size == 0 ? root == null : root != null;
    }

    boolean sizeOk() {
        return count(root) == size;
    }

    int count(Node n) {
        if (n == null) {
            return 0;
        }
        return 1 + count(n.left) + count(n.right);
    }

    boolean leftSpineOk() {
        for (Node n = root; n != null; n = n.left) {
            if (n.key < 0) {
                return false;
            }
        }
        return true;
    }
""",
        "props": [
            ("rootOk", ["BinaryTree.root", "BinaryTree.size"]),
            # recursion is not iteration by default, so no plus labels here
            ("sizeOk", ["BinaryTree.root", "BinaryTree.size", "BinaryTree.Node.left", "BinaryTree.Node.right"]),
            ("leftSpineOk", ["BinaryTree.root", "BinaryTree.Node.key", "BinaryTree.Node.key+",
                             "BinaryTree.Node.left", "BinaryTree.Node.left+"]),
        ],
        "graph": {
            "nodes": [
                ("BinaryTree", "class"),
                ("BinaryTree.Node", "class"),
                ("int", "primitive"),
            ],
            "edges": [
                ("BinaryTree", "BinaryTree.Node", "root", "BinaryTree", False),
                ("BinaryTree", "int", "size", "BinaryTree", False),
                ("BinaryTree.Node", "int", "key", "BinaryTree.Node", True),
                ("BinaryTree.Node", "BinaryTree.Node", "left", "BinaryTree.Node", True),
                ("BinaryTree.Node", "BinaryTree.Node", "right", "BinaryTree.Node", True),
            ],
        },
    },
    {
        "name": "HeapArray",
        "body": """    int[] array;
    int size;
    int capacity;

    boolean sizeOk() {
        return size >= 0 && size <= array.length;
    }

    boolean heapOk() {
        for (int i = 1; i < size; i++) {
            if (array[(i - 1) / 2] > array[i]) {
                return false;
            }
        }
        return true;
    }

    boolean capacityOk() {
        return capacity == array.length;
    }

    boolean nonNegative() {
        for (int i = 0; i < size; i++) {
            if (array[i] < 0) {
                return false;
            }
        }
        return true;
    }
""",
        "props": [
            ("sizeOk", ["HeapArray.array", "HeapArray.size"]),
            ("heapOk", ["HeapArray.array", "HeapArray.array+", "HeapArray.size"]),
            ("capacityOk", ["HeapArray.array", "HeapArray.capacity"]),
            ("nonNegative", ["HeapArray.array", "HeapArray.array+", "HeapArray.size"]),
        ],
        "graph": {
            "nodes": [
                ("HeapArray", "class"),
                ("int", "primitive"),
            ],
            "edges": [
                ("HeapArray", "int", "array", "HeapArray", True),
                ("HeapArray", "int", "capacity", "HeapArray", False),
                ("HeapArray", "int", "size", "HeapArray", False),
            ],
        },
    },
]


def label_key(label):
    plus = label.endswith("+")
    body = label[:-1] if plus else label
    cls, field = body.rsplit(".", 1)
    return (cls, field, plus)


def universe(graph):
    out = []
    for _, _, field, declaring, iterable in graph["edges"]:
        out.append(f"{declaring}.{field}")
        if iterable:
            out.append(f"{declaring}.{field}+")
    return sorted(out, key=label_key)


def main():
    graphs, cases = [], []
    for fam in FAMILIES:
        name, props = fam["name"], fam["props"]
        invs = []
        for k in range(1, len(props) + 1):
            for combo in itertools.combinations(range(len(props)), k):
                digits = "".join(str(i + 1) for i in combo)
                call = " && ".join(f"{props[i][0]}()" for i in combo)
                covered = sorted({l for i in combo for l in props[i][1]}, key=label_key)
                invs.append((f"inv_{digits}", call, covered, k))
        methods = "".join(f"\n    boolean {m}() {{\n        return {c};\n    }}\n" for m, c, _, _ in invs)
        src = f"public class {name} {{\n{fam['body']}{methods}}}\n"
        (HERE / "src" / f"{name}.java").write_text(src)

        u = universe(fam["graph"])
        graphs.append({
            "root": name,
            "nodes": [{"id": i, "kind": k} for i, k in sorted(fam["graph"]["nodes"])],
            "edges": [
                {"from": f, "to": t, "field": fl, "declaring": d, "iterable": it}
                for f, t, fl, d, it in sorted(fam["graph"]["edges"], key=lambda e: (e[3], e[2]))
            ],
            "iterable": sorted((f"{d}.{fl}" for _, _, fl, d, it in fam["graph"]["edges"] if it), key=label_key),
            "universe": u,
        })
        oracles = [
            {"id": f"{name}#{m}/0", "covered": cov, "sfc": len(cov) / len(u), "properties": k}
            for m, _, cov, k in invs
        ]
        oracles.sort(key=lambda o: o["id"])
        agg = sorted({l for o in oracles for l in o["covered"]}, key=label_key)
        cases.append({
            "family": name,
            "roots": [name],
            "mode": "invariants",
            "selector": "inv_.*",
            "universe": u,
            "oracles": oracles,
            "aggregate": {"covered": agg, "sfc": len(agg) / len(u)},
        })

    (HERE / "expected_graph.json").write_text(json.dumps({"graphs": graphs}, indent=2) + "\n")
    (HERE / "expected_coverage.json").write_text(json.dumps({"cases": cases}, indent=2) + "\n")


if __name__ == "__main__":
    main()
