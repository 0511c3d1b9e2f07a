"""Write the 10-task mini-benchmark: annotated Java, suites and tasks.json.

Suite outputs come from Python ports of each method, so the suites do not
depend on a JDK.  Run from the repository root:

    python3 scripts/make_minibench.py [--out tests/fixtures/minibench]
"""

import argparse
import json
import math
from pathlib import Path

from jmlharness.testkit.suite import MethodSignature, TestSuite, save_suite
from jmlharness.values import Value, wrap_int


def i32(x):
    return Value.int32(x)


def arr(xs):
    return Value.array("int32", [Value.int32(x) for x in xs])


def ch(c):
    return Value.char(c)


NULL = Value.null()

TASKS = []


def task(tid, category, cls, method, params, ret, java, ref, inputs, invalid=()):
    TASKS.append(dict(id=tid, category=category, cls=cls, method=method, params=params,
                      ret=ret, java=java, ref=ref, inputs=inputs, invalid=invalid))


# branch ---------------------------------------------------------------------

task("b1_abs", "branch", "Abs", "abs", (("x", "int32"),), "int32", """\
public class Abs {
    /*@ requires x >= -2147483647;
      @ ensures \\result >= 0;
      @ ensures \\result == x || \\result == -x;
      @*/
    public static int abs(int x) {
        if (x < 0) {
            return -x;
        }
        return x;
    }
}
""", lambda x: abs(x), [(i32(5),), (i32(-7),), (i32(0),), (i32(12),), (i32(-1),)])

task("b2_max", "branch", "Max", "max", (("a", "int32"), ("b", "int32")), "int32", """\
public class Max {
    //@ ensures \\result >= a && \\result >= b;
    public static int max(int a, int b) {
        if (a >= b) {
            return a;
        } else {
            return b;
        }
    }
}
""", lambda a, b: max(a, b), [(i32(3), i32(9)), (i32(4), i32(-2)), (i32(6), i32(6)), (i32(-5), i32(-8)), (i32(0), i32(1))])

# multi-path loop --------------------------------------------------------------

task("m1_count_positive", "multi_path_loop", "CountPositive", "countPositive", (("a", "int32[]"),), "int32", """\
public class CountPositive {
    /*@ requires a != null;
      @ ensures \\result >= 0 && \\result <= a.length;
      @*/
    public static int countPositive(int[] a) {
        int n = 0;
        for (int i = 0; i < a.length; i++) {
            if (a[i] > 0) {
                n++;
            } else if (a[i] < -100) {
                n = n + 0;
            }
        }
        return n;
    }
}
""", lambda a: sum(1 for x in a if x > 0),
    [(arr([1, -2, 3]),), (arr([]),), (arr([-1, -1]),), (arr([4, 5, 6, 7]),), (arr([0]),)],
    invalid=[(NULL,)])

task("m2_index_of", "multi_path_loop", "IndexOf", "indexOf", (("a", "int32[]"), ("k", "int32")), "int32", """\
public class IndexOf {
    /*@ requires a != null;
      @ ensures (\\result == -1 && (\\forall int i; 0 <= i && i < a.length; a[i] != k))
      @      || (0 <= \\result && \\result < a.length && a[\\result] == k
      @          && (\\forall int j; 0 <= j && j < \\result; a[j] != k));
      @*/
    public static int indexOf(int[] a, int k) {
        for (int i = 0; i < a.length; i++) {
            if (a[i] == k) {
                return i;
            }
        }
        return -1;
    }
}
""", lambda a, k: next((i for i, x in enumerate(a) if x == k), -1),
    [(arr([4, 2, 7]), i32(7)), (arr([1, 1]), i32(1)), (arr([]), i32(3)), (arr([5, 6, 5]), i32(5)), (arr([9]), i32(2))],
    invalid=[(NULL, i32(1))])

# nested ---------------------------------------------------------------------

task("n1_quadrant", "nested", "Quadrant", "quadrant", (("x", "int32"), ("y", "int32")), "int32", """\
public class Quadrant {
    /*@ requires x != 0 && y != 0;
      @ ensures (x > 0 && y > 0) ==> \\result == 1;
      @ ensures (x < 0 && y > 0) ==> \\result == 2
      @ ensures (x < 0 && y < 0) ==> \\result == 3;
      @*/
    public static int quadrant(int x, int y) {
        if (x > 0) {
            if (y > 0) { return 1; } else { return 4; }
        } else {
            if (y > 0) { return 2; } else { return 3; }
        }
    }
}
""", lambda x, y: (1 if y > 0 else 4) if x > 0 else (2 if y > 0 else 3),
    [(i32(1), i32(1)), (i32(-2), i32(3)), (i32(-1), i32(-1)), (i32(5), i32(-5))],
    invalid=[(i32(0), i32(1)), (i32(2), i32(0))])

task("n2_grade", "nested", "Grade", "grade", (("score", "int32"),), "char", """\
public class Grade {
    /*@ requires 0 <= score && score <= 100;
      @ ensures score >= 90 ==> \\result == 'A';
      @ ensures (score >= 80 && score < 90) ==> \\result == 'B';
      @ ensures score < 80 ==> \\result == 'F';
      @*/
    public static char grade(int score) {
        if (score >= 80) {
            if (score >= 90) { return 'A'; }
            return 'B';
        } else {
            if (score >= 60) { return 'C'; }
            return 'F';
        }
    }
}
""", lambda s: "A" if s >= 90 else "B" if s >= 80 else "C" if s >= 60 else "F",
    [(i32(95),), (i32(85),), (i32(70),), (i32(10),), (i32(100),)],
    invalid=[(i32(-1),), (i32(101),)])

# sequential -----------------------------------------------------------------

task("s1_sum3", "sequential", "Sum3", "sum3", (("a", "int32"), ("b", "int32"), ("c", "int32")), "int32", """\
public class Sum3 {
    /*@ requires -1000 <= a && a <= 1000 && -1000 <= b && b <= 1000 && -1000 <= c && c <= 1000;
      @ ensures \\result == a + b + c;
      @*/
    public static int sum3(int a, int b, int c) {
        int s = a;
        s = s + b;
        s = s + c;
        return s;
    }
}
""", lambda a, b, c: a + b + c,
    [(i32(1), i32(2), i32(3)), (i32(-4), i32(0), i32(4)), (i32(10), i32(-20), i32(5)), (i32(0), i32(0), i32(0)), (i32(7), i32(7), i32(7))],
    invalid=[(i32(5000), i32(0), i32(0))])

task("s2_mid", "sequential", "Mid", "mid", (("lo", "int32"), ("hi", "int32")), "int32", """\
public class Mid {
    /*@ requires lo <= hi;
      @ ensures true;
      @*/
    public static int mid(int lo, int hi) {
        int d = hi - lo;
        int half = d / 2;
        return lo + half;
    }
}
""", lambda lo, hi: lo + (hi - lo) // 2,
    [(i32(0), i32(10)), (i32(3), i32(4)), (i32(-6), i32(6)), (i32(5), i32(5)), (i32(1), i32(8))],
    invalid=[(i32(4), i32(1))])

# single-path loop -------------------------------------------------------------

task("l1_factorial", "single_path_loop", "Factorial", "factorial", (("n", "int32"),), "int32", """\
public class Factorial {
    /*@ requires 0 <= n && n <= 12;
      @ ensures \\result >= 1;
      @*/
    public static int factorial(int n) {
        int f = 1;
        for (int i = 2; i <= n; i++) {
            f = f * i;
        }
        return f;
    }
}
""", lambda n: math.factorial(n),
    [(i32(0),), (i32(1),), (i32(3),), (i32(5),), (i32(10),)],
    invalid=[(i32(-1),), (i32(13),)])

task("l2_array_max", "single_path_loop", "ArrayMax", "arrayMax", (("a", "int32[]"),), "int32", """\
public class ArrayMax {
    /*@ requires a != null && a.length > 0;
      @ ensures (\\forall int i; 0 <= i && i < a.length; a[i] <= \\result);
      @ ensures (\\exists int i; 0 <= i && i < a.length; a[i] == \\result);
      @*/
    public static int arrayMax(int[] a) {
        int m = a[0];
        for (int i = 1; i < a.length; i++) {
            m = Math.max(m, a[i]);
        }
        return m;
    }
}
""", lambda a: max(a),
    [(arr([3, 9, 2]),), (arr([-5]),), (arr([1, 1, 1]),), (arr([-3, -8, -1]),), (arr([0, 100]),)],
    invalid=[(NULL,), (arr([]),)])


def _output(t, inputs):
    py = []
    for v in inputs:
        py.append([x.v for x in v.v] if v.tag.endswith("[]") else v.v)
    out = t["ref"](*py)
    if t["ret"] == "char":
        return ch(out)
    return Value.int32(wrap_int(out, 32))


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--out", default="tests/fixtures/minibench")
    args = ap.parse_args()
    out = Path(args.out)
    (out / "tasks").mkdir(parents=True, exist_ok=True)
    (out / "suites").mkdir(parents=True, exist_ok=True)
    manifest = {"schemaVersion": 1, "tasks": []}
    for t in TASKS:
        (out / "tasks" / f"{t['cls']}.java").write_text(t["java"], encoding="utf-8")
        sig = MethodSignature(t["method"], t["params"], t["ret"])
        pairs = [(inp, _output(t, inp)) for inp in t["inputs"]]
        save_suite(TestSuite(sig, pairs, list(t["invalid"])), out / "suites" / f"{t['id']}.json")
        manifest["tasks"].append({
            "id": t["id"],
            "category": t["category"],
            "file": f"tasks/{t['cls']}.java",
            "method": t["method"],
            "suite": f"suites/{t['id']}.json",
        })
    (out / "tasks.json").write_text(json.dumps(manifest, indent=2) + "\n", encoding="utf-8")
    print(f"wrote {len(TASKS)} tasks to {out}")


if __name__ == "__main__":
    main()
