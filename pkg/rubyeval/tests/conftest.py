import json

import pytest

from rubyeval.core.minilang import tree_from_nested

CODE1 = """void foo(int i) {
    int j;
    if (i < 2) {
        j = 1;
    } else {
        j = 2;
    }
}"""

CODE2 = """void foo(int i) {
    int j;
    if (i < 2)
        j = i;
    j = 2;
}"""

# code 1 with every local renamed
CODE1_RENAMED = """void foo(int count) {
    int total;
    if (count < 2) {
        total = 1;
    } else {
        total = 2;
    }
}"""

JAVA_CONSTRUCTOR = """public ClientQueryResult(Transaction ta, int initialSize){
    super(ta, initialSize);
}"""

CSHARP_CONSTRUCTOR = "public ClientQueryResult(Transaction ta, int initialSize) : base(ta, initialSize) {}"

BROKEN_TRANSLATION = "public ClientQueryResult(Transaction ta, int initialSize) : base(ta {, initialSize) ; }"


@pytest.fixture
def code1():
    return CODE1


@pytest.fixture
def code2():
    return CODE2


@pytest.fixture
def code1_renamed():
    return CODE1_RENAMED


@pytest.fixture
def csharp_constructor():
    return CSHARP_CONSTRUCTOR


@pytest.fixture
def broken_translation():
    return BROKEN_TRANSLATION


@pytest.fixture
def java_constructor():
    return JAVA_CONSTRUCTOR


@pytest.fixture
def if_tree_pair():
    """An if statement whose branch is modified and which gains an else branch (6 + 10 nodes)."""
    before = ("If", None, (
        ("Name", "flag", ()),
        ("Block", None, (
            ("Assign", "=", (("Name", "j", ()), ("Literal", "1", ()))),
        )),
    ))
    after = ("If", None, (
        ("Name", "done", ()),
        ("Block", None, (
            ("Assign", "=", (("Name", "j", ()), ("Literal", "5", ()))),
        )),
        ("Block", None, (
            ("Assign", "=", (("Name", "j", ()), ("Literal", "2", ()))),
        )),
    ))
    return tree_from_nested(before), tree_from_nested(after)


@pytest.fixture
def write_jsonl(tmp_path):
    def _write(name, rows):
        path = tmp_path / name
        lines = [r if isinstance(r, str) else json.dumps(r) for r in rows]
        path.write_text("\n".join(lines) + "\n", encoding="utf-8")
        return path
    return _write


# --- random MiniLang methods ------------------------------------------------

NAMES = ("a", "b", "total", "count")
BINARY_OPERATORS = ("+", "-", "*", "%", "<", "==", "&&", "||")


def random_expression(rng, depth=2):
    if depth == 0 or rng.random() < 0.3:
        return rng.choice([rng.choice(NAMES), str(rng.randint(0, 12)), '"a b"', "true", "null"])

    def inner():
        return random_expression(rng, depth - 1)

    shape = rng.randrange(6)
    if shape == 0:
        return f"{inner()} {rng.choice(BINARY_OPERATORS)} {inner()}"
    if shape == 1:
        return f"({inner()})"
    if shape == 2:
        return f"!({inner()})"
    if shape == 3:
        return f"log({inner()}, {inner()})"
    if shape == 4:
        return f"xs[{inner()}]"
    return f"{rng.choice(NAMES)}.Length"


def random_statement(rng, depth=2):
    def block():
        return "{ " + " ".join(random_statement(rng, depth - 1) for _ in range(rng.randint(1, 3))) + " }"

    expr = random_expression(rng)
    shape = rng.randrange(8 if depth else 4)
    if shape == 0:
        return f"{rng.choice(NAMES)} = {expr};"
    if shape == 1:
        return f"log({expr});"
    if shape == 2:
        return f"int v{rng.randint(0, 9)} = {expr};"
    if shape == 3:
        return f"{rng.choice(NAMES)} += {expr};"
    if shape == 4:
        tail = f" else {block()}" if rng.random() < 0.5 else ""
        return f"if ({expr}) {block()}{tail}"
    if shape == 5:
        return f"while ({expr}) {block()}"
    if shape == 6:
        return f"for (int i = 0; i < {expr}; i++) {block()}"
    return f"foreach (var item in xs) {block()}"


def random_method(rng, statements=4, depth=2):
    """A parseable method built from assignments, calls, declarations and nested control flow."""
    body = " ".join(random_statement(rng, depth) for _ in range(statements))
    return f"int run(int a, int[] xs) {{ {body} return a; }}"
