# Command-line vocabulary
# Family names accepted by `generate` and example invocations shown in --help

from src.families import Family

# CLI family name -> (family, fixed arguments)
FAMILY_ALIASES = {
    "prime2": (Family.PRIME2, {}),
    "prime3": (Family.PRIME3, {}),
    "prime4": (None, {}),  # class chosen by --class
    "sym-half-pi": (Family.SYM_HALF_PI, {}),
    "asym-half-pi": (Family.ASYM_HALF_PI, {}),
    "twin": (None, {}),  # base chosen by --base
    "bb1": (Family.BB1, {}),
    "levitt-ernst": (Family.LEVITT_ERNST, {}),
    "freeman": (Family.SYM_HALF_PI, {"n": 2}),
    "levitt": (Family.ASYM_HALF_PI, {"n": 2}),
}

PRIME4_CLASSES = {
    "ABBA": Family.PRIME4_ABBA,
    "AAAA": Family.PRIME4_AAAA,
}

TWIN_BASES = {
    "sym": Family.TWIN_SYM,
    "asym": Family.TWIN_ASYM,
    "asym-reversed": Family.TWIN_ASYM_REVERSED,
}

EXAMPLE_COMMANDS = {
    "generate": [
        "python app.py generate sym-half-pi --n 4",
        "python app.py generate twin --base asym --n 3 --theta 0.75 --out twin.json",
        "python app.py generate prime3 --p 0.25 --variant 4",
    ],
    "evaluate": [
        "python app.py profile twin.json --points 201 --out twin.csv",
        "python app.py series twin.json --order 12",
        "python app.py window twin.json --tol 1e-4",
    ],
    "derive": [
        "python app.py solve --template ABBBA --p 0.1",
        "python app.py verify-table primes twins",
        "python app.py window --audit",
    ],
}


def epilog() -> str:
    lines = ["examples:"]
    for group in EXAMPLE_COMMANDS.values():
        lines.extend(f"  {cmd}" for cmd in group)
    return "\n".join(lines)
