"""JSON Schemas for the CLI's ``--format json`` output, one per subcommand.

Exact rationals are strings "p/q"; high-precision reals are decimal strings.
"""

RATIONAL = {"type": "string", "pattern": r"^-?[0-9]+/[0-9]+$"}
DECIMAL = {"type": "string", "pattern": r"^-?[0-9.]+(e[-+]?[0-9]+)?$"}

_WITNESS = {
    "oneOf": [
        {"type": "null"},
        {
            "type": "object",
            "required": ["kind", "P", "Q", "D"],
            "properties": {"kind": {"const": "base"}, "P": {"type": "integer"}, "Q": {"type": "integer"},
                           "D": {"type": "integer"}},
            "additionalProperties": False,
        },
        {
            "type": "object",
            "required": ["kind", "factor"],
            "properties": {"kind": {"const": "factor"}, "factor": {"type": "integer", "minimum": 2}},
            "additionalProperties": False,
        },
        {
            "type": "object",
            "required": ["kind", "factors"],
            "properties": {"kind": {"const": "twin"},
                           "factors": {"type": "array", "items": {"type": "integer"}, "minItems": 2, "maxItems": 2}},
            "additionalProperties": False,
        },
        {
            "type": "object",
            "required": ["kind", "a"],
            "properties": {"kind": {"const": "mr_base"}, "a": {"type": "integer"}},
            "additionalProperties": False,
        },
    ]
}

TEST = {
    "type": "object",
    "required": ["n", "D", "verdict", "witness", "rounds", "rounds_passed", "seed"],
    "properties": {
        "n": {"type": "integer"},
        "D": {"type": "integer"},
        "verdict": {"enum": ["probable_prime", "composite"]},
        "witness": _WITNESS,
        "rounds": {"type": "integer", "minimum": 1},
        "rounds_passed": {"type": "integer", "minimum": 0},
        "seed": {"type": "integer", "minimum": 0},
    },
    "additionalProperties": False,
}

_PRIME_SPLIT = {
    "type": "object",
    "required": ["p", "r", "eps", "k", "q"],
    "properties": {"p": {"type": "integer"}, "r": {"type": "integer", "minimum": 1},
                   "eps": {"enum": [-1, 1]}, "k": {"type": "integer", "minimum": 0}, "q": {"type": "integer"}},
    "additionalProperties": False,
}

CENSUS = {
    "type": "object",
    "required": ["n", "D", "sl", "phi_d", "alpha", "alpha_bar", "admissible", "pass_probability", "decomposition"],
    "properties": {
        "n": {"type": "integer"},
        "D": {"type": "integer"},
        "sl": {"type": "integer", "minimum": 0},
        "phi_d": {"type": "integer", "minimum": 1},
        "alpha": RATIONAL,
        "alpha_bar": RATIONAL,
        "admissible": {"type": "integer", "minimum": 0},
        "pass_probability": RATIONAL,
        "decomposition": {
            "type": "object",
            "required": ["eps_n", "kappa", "q", "per_prime"],
            "properties": {"eps_n": {"enum": [-1, 1]}, "kappa": {"type": "integer"}, "q": {"type": "integer"},
                           "per_prime": {"type": "array", "items": _PRIME_SPLIT, "minItems": 1}},
            "additionalProperties": False,
        },
    },
    "additionalProperties": False,
}

CLASSIFY = {
    "type": "object",
    "required": ["n", "D", "in_c3", "form", "params", "eps_signs"],
    "properties": {
        "n": {"type": "integer"},
        "D": {"type": "integer"},
        "in_c3": {"type": "boolean"},
        "form": {"enum": ["SquareOfSmallPrime", "TwinPair", "TripleShift", "DoubleShift",
                          "TripleLucasCarmichael", "NotInC3"]},
        "params": {"type": "object"},
        "eps_signs": {"type": "object", "additionalProperties": {"enum": [-1, 1]}},
    },
    "additionalProperties": False,
}

BOUND = {
    "type": "object",
    "required": ["theorem", "params", "value", "neg_log2", "hypotheses_met", "near_boundary"],
    "properties": {
        "theorem": {"type": "string"},
        "params": {"type": "object", "additionalProperties": {"type": "integer"}},
        "value": DECIMAL,
        "neg_log2": {"type": "integer"},
        "hypotheses_met": {"type": "boolean"},
        "near_boundary": {"type": "boolean"},
    },
    "additionalProperties": False,
}

_CONFIG = {
    "type": "object",
    "required": ["k", "t", "l", "D", "seed", "twin_precheck"],
    "properties": {"k": {"type": "integer", "minimum": 4}, "t": {"type": "integer", "minimum": 1},
                   "l": {"type": "integer", "minimum": 0}, "D": {"type": "integer"},
                   "seed": {"type": "integer", "minimum": 0}, "twin_precheck": {"type": "boolean"}},
    "additionalProperties": False,
}

GEN = {
    "type": "object",
    "required": ["config", "candidates_tested", "output", "output_is_composite", "rounds_per_candidate",
                 "rejected_trial_division", "rejected_gcd_d", "rejected_twin"],
    "properties": {
        "config": _CONFIG,
        "candidates_tested": {"type": "integer", "minimum": 1},
        "output": {"type": "integer"},
        "output_is_composite": {"type": "boolean"},
        "rounds_per_candidate": {"type": "array", "items": {"type": "integer", "minimum": 0}},
        "rejected_trial_division": {"type": "integer", "minimum": 0},
        "rejected_gcd_d": {"type": "integer", "minimum": 0},
        "rejected_twin": {"type": "integer", "minimum": 0},
    },
    "additionalProperties": False,
}

_BY_CONVENTION = {
    "type": "object",
    "required": ["nominal", "algorithm"],
    "properties": {"nominal": RATIONAL, "algorithm": RATIONAL},
    "additionalProperties": False,
}

EXPERIMENT_EXACT = {
    "type": "object",
    "required": ["k", "t", "D", "l", "prime_count", "composite_count", "composite_sum", "q"],
    "properties": {
        "k": {"type": "integer"}, "t": {"type": "integer"}, "D": {"type": "integer"}, "l": {"type": "integer"},
        "prime_count": {"type": "integer", "minimum": 0},
        "composite_count": {"type": "integer", "minimum": 0},
        "composite_sum": _BY_CONVENTION,
        "q": _BY_CONVENTION,
    },
    "additionalProperties": False,
}

EXPERIMENT_MC = {
    "type": "object",
    "required": ["k", "t", "l", "D", "seed", "trials", "composites", "estimate", "se", "exact"],
    "properties": {
        "k": {"type": "integer"}, "t": {"type": "integer"}, "l": {"type": "integer"}, "D": {"type": "integer"},
        "seed": {"type": "integer"}, "trials": {"type": "integer", "minimum": 1},
        "composites": {"type": "integer", "minimum": 0},
        "estimate": DECIMAL, "se": DECIMAL,
        "exact": {"oneOf": [{"const": ""}, DECIMAL]},
    },
    "additionalProperties": False,
}

BY_COMMAND = {
    "test": TEST,
    "census": CENSUS,
    "classify": CLASSIFY,
    "bounds eval": BOUND,
    "gen": GEN,
    "experiment exact": EXPERIMENT_EXACT,
    "experiment mc": EXPERIMENT_MC,
}
