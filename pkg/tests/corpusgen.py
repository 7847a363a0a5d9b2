"""Seeded generator of mini-language programs for the test corpora.

Programs are built from randomized templates: a data-holder class with
getters over (some deliberately uninitialized) fields, a pool of arithmetic
helper methods, and a `main` entry that feeds every parameter through
unconditional operations, loops over the array input, branches, concatenates
a report string and calls program-specific boundary APIs.

Guarantees relied on by the acceptance suite:
  * every graph component touches an operator or API-call node (entry
    parameters are consumed unconditionally, objects feed arithmetic),
  * no static non-final fields with literal initializers in bases (so no
    degree-0 nodes before mutation),
  * bounded branching, so path counts stay moderate,
  * structurally distinct programs for distinct indices (different operator
    mixes, constants, APIs and control shapes).
"""

from __future__ import annotations

import random

from bsim.lang import SourceUnit

API_POOL = [
    ("Console", ("log", "warn")),
    ("Logger", ("write", "append")),
    ("Sink", ("push", "emit")),
    ("Audit", ("record", "note")),
    ("Metrics", ("gauge", "count")),
    ("Channel", ("send", "flush")),
    ("Tracer", ("mark", "step")),
    ("Board", ("post", "wipe")),
]

OPS = ("+", "-", "*", "%")
CMPS = ("<", "<=", ">", ">=")


def _helper(rng: random.Random, idx: int, consts: list[int], statements: int) -> str:
    """One static int helper with a randomized arithmetic pipeline."""
    lines = [f"    static int step{idx}(int a, int b) {{"]
    vars_ = ["a", "b"]
    for k in range(statements):
        op1, op2 = rng.choice(OPS), rng.choice(OPS)
        src1, src2 = rng.choice(vars_), rng.choice(vars_)
        c = rng.choice(consts)
        name = f"t{k}"
        lines.append(f"        int {name} = {src1} {op1} {src2} {op2} {c};")
        vars_.append(name)
    ret1, ret2 = rng.choice(vars_), rng.choice(vars_)
    lines.append(f"        return {ret1} {rng.choice(OPS)} {ret2};")
    lines.append("    }")
    return "\n".join(lines)


def _store_class(rng: random.Random, consts: list[int], field_count: int) -> str:
    """Data holder with uninitialized primitive fields behind getters."""
    fields = [f"level{k}" for k in range(field_count)]
    lines = ["class Store {"]
    for f in fields:
        lines.append(f"    int {f};")
    lines.append("    String label;")
    lines.append("    Store(int seed) {")
    lines.append(f"        this.{fields[0]} = seed * {rng.choice(consts)};")
    lines.append("    }")
    for f in fields:
        cap = f[0].upper() + f[1:]
        lines.append(f"    int get{cap}() {{ return this.{f}; }}")
    lines.append(f"    void lift(int d) {{ this.{fields[0]} = this.{fields[0]} + d; }}")
    body = " + \"|\" + ".join(f"this.{f}" for f in fields[:2])
    lines.append(f"    String describe() {{ return {body}; }}")
    lines.append("}")
    return "\n".join(lines)


def _loop(rng: random.Random, consts: list[int], helper_count: int) -> list[str]:
    shape = rng.randrange(3)
    helper = rng.randrange(helper_count)
    c = rng.choice(consts)
    if shape == 0:
        return [
            "        for (int i = 0; i < data.length; i++) {",
            f"            acc = step{helper}(acc, data[i]);",
            f"            acc += {c};",
            "        }",
        ]
    if shape == 1:
        return [
            "        for (int v : data) {",
            f"            acc = acc + step{helper}(v, {c});",
            "        }",
        ]
    return [
        "        int i = 0;",
        "        while (i < data.length) {",
        f"            acc = step{helper}(acc, data[i]) % {c};",
        "            i++;",
        "        }",
    ]


def _branch(rng: random.Random, consts: list[int], helper_count: int) -> list[str]:
    shape = rng.randrange(3)
    c1, c2, c3 = rng.choice(consts), rng.choice(consts), rng.choice(consts)
    h = rng.randrange(helper_count)
    if shape == 0:
        return [
            f"        if (acc {rng.choice(CMPS)} {c1}) {{",
            f"            acc = step{h}(acc, {c2});",
            "        } else {",
            f"            acc = acc - {c3};",
            "        }",
        ]
    if shape == 1:
        return [
            f"        switch (x % {max(2, c1 % 5)}) {{",
            f"            case 0: acc = acc * {c2}; break;",
            f"            case 1: acc = acc + {c3}; break;",
            f"            default: acc = step{h}(acc, {c1}); break;",
            "        }",
        ]
    return [
        f"        acc = acc {rng.choice(CMPS)} {c1} ? acc + {c2} : acc * {c3 % 7 + 2};",
    ]


def generate_program(index: int, master_seed: int = 20_26,
                     size: str = "small") -> list[SourceUnit]:
    """One deterministic program; distinct indices differ structurally."""
    # string seeds hash deterministically across processes (unlike tuples)
    rng = random.Random(f"{master_seed}:{index}:{size}")
    consts = rng.sample(range(2, 97), 8)
    helper_count = rng.randint(3, 4) if size == "small" else rng.randint(14, 18)
    helper_stmts = (3, 6) if size == "small" else (12, 20)
    api_type, api_methods = API_POOL[index % len(API_POOL)]
    api2_type, api2_methods = API_POOL[(index * 3 + 1) % len(API_POOL)]

    helpers = [_helper(rng, k, consts, rng.randint(*helper_stmts))
               for k in range(helper_count)]

    main_lines = [
        "    static int main(int x, int[] data) {",
        f"        int acc = x * {rng.choice(consts)};",
        f"        Store store = new Store(x + {rng.choice(consts)});",
        f"        store.lift(acc % {rng.choice(consts)});",
        "        acc = acc + store.getLevel0();",
    ]
    main_lines.extend(_loop(rng, consts, helper_count))
    # route every holder field through the computation: value-injecting
    # default initializers then concretize these chains
    for k in range(3):
        main_lines.append(f"        acc = acc {rng.choice(OPS)} "
                          f"store.getLevel{k}();")
    if size == "large":
        # distinct helpers per switch arm: more lines, no extra forking
        c1, c2 = rng.choice(consts), rng.choice(consts)
        main_lines.extend([
            f"        switch (x % {rng.randint(2, 4)}) {{",
            f"            case 0: acc = step1(acc, {c1}); break;",
            f"            case 1: acc = step2(acc, {c2}); break;",
            "            default: acc = step3(acc, x); break;",
            "        }",
        ])
    else:
        main_lines.extend(_branch(rng, consts, helper_count))
    field_reads = rng.randint(1, 2)
    for k in range(field_reads):
        main_lines.append(f"        acc = step{rng.randrange(helper_count)}"
                          f"(acc, store.getLevel{(k + 1) % 3}());")
    if size == "large":
        # a short straight-line chain: long traces without extra branching
        for k in range(4):
            main_lines.append(f"        acc = step{helper_count - 1 - k}"
                              f"(acc, {rng.choice(consts)});")
    main_lines.append(f'        String report = "{api_type.lower()}:" + acc '
                      f'+ "/" + store.describe();')
    main_lines.append(f"        {api_type}.{rng.choice(api_methods)}(report);")
    main_lines.append(f"        {api2_type}.{rng.choice(api2_methods)}(acc);")
    main_lines.append("        return acc;")
    main_lines.append("    }")

    field_count = rng.randint(3, 4)
    app = "class App {\n" + "\n".join(main_lines) + "\n\n" + "\n\n".join(helpers) + "\n}"
    store = _store_class(rng, consts, field_count)
    text = app + "\n\n" + store + "\n"
    return [SourceUnit(f"p{index:02d}.src", text)]


def generate_corpus_programs(count: int, master_seed: int = 20_26,
                             size: str = "small") -> list[tuple[str, list[SourceUnit]]]:
    return [(f"p{index:02d}", generate_program(index, master_seed, size))
            for index in range(count)]
