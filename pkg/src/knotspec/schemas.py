"""JSON schemas for the CLI's ``--format json`` output (draft 2020-12)."""

_group = {
    "free_rank": {"type": "integer", "minimum": 0},
    "invariant_factors": {"type": "array", "items": {"type": "integer", "minimum": 2}},
}

E1_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "knotspec e1",
    "type": "object",
    "required": ["p", "q", "free_rank", "torsion", "basis"],
    "properties": {
        "p": {"type": "integer", "minimum": 0},
        "q": {"type": "integer", "minimum": 0},
        "free_rank": {"type": "integer", "minimum": 0},
        "torsion": {"type": "array", "items": {"type": "string"}},
        "basis": {"type": "array", "items": {"type": "string"}},
        "torsion_basis": {"type": "array", "items": {"type": "string"}},
        "formal": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["index", "group"],
                "properties": {"index": {"type": "string"}, "group": {"type": "string"}},
            },
        },
        "group": {"type": "string"},
    },
}

D1_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "knotspec d1",
    "type": "object",
    "required": ["p", "status", "images", "matrix", "d1_matrix_rank"],
    "properties": {
        "p": {"type": "integer", "minimum": 1},
        "status": {"enum": ["zero", "isomorphism", "computed"]},
        "images": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["input", "output"],
                "properties": {
                    "input": {"type": "string"},
                    "output": {"type": "string"},
                    "oracle_agrees": {"type": "boolean"},
                },
            },
        },
        "matrix": {
            "type": "object",
            "required": ["columns", "rows"],
            "properties": {
                "columns": {"type": "array", "items": {"type": "string"}},
                "rows": {"type": "array", "items": {"type": "array", "items": {"type": "integer"}}},
            },
        },
        "d1_matrix_rank": {"type": "integer", "minimum": 0},
        "cancellation": {"type": "string"},
        "oracle": {
            "type": "object",
            "required": ["agree", "checked"],
            "properties": {"agree": {"type": "boolean"}, "checked": {"type": "integer", "minimum": 0}},
        },
    },
}

E2_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "knotspec e2",
    "type": "object",
    "required": ["p", "e2_invariant_factors", "d1_matrix_rank", "certificates"],
    "properties": {
        "p": {"type": "integer", "minimum": 0},
        "e2": {"type": "string"},
        "e2_free_rank": {"type": "integer", "minimum": 0},
        "e2_invariant_factors": _group["invariant_factors"],
        "d1_matrix_rank": {"type": "integer", "minimum": 0},
        "certificates": {"type": "object"},
    },
}

TREES_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "knotspec trees",
    "type": "object",
    "required": ["degree", "modulo", "generators", "group", *_group],
    "properties": {
        "degree": {"type": "integer", "minimum": 1},
        "modulo": {"type": "array", "items": {"enum": ["as", "ihx", "stu2"]}},
        "generators": {"type": "array", "items": {"type": "string"}},
        "group": {"type": "string"},
        **_group,
    },
}

DSEP_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "knotspec dsep",
    "type": "object",
    "required": ["p", "generators"],
    "properties": {
        "p": {"type": "integer", "minimum": 4},
        "generators": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["term", "k", "graph", "sign"],
                "properties": {
                    "term": {"type": "string"},
                    "k": {"type": "integer", "minimum": 1},
                    "graph": {"type": "string"},
                    "sign": {"enum": [1, -1]},
                },
            },
        },
    },
}

VERIFY_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "knotspec verify",
    "type": "object",
    "required": ["suite", "passed", "results"],
    "properties": {
        "suite": {"type": "string"},
        "passed": {"type": "boolean"},
        "results": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["criterion", "name", "passed", "detail"],
                "properties": {
                    "criterion": {"type": "string"},
                    "name": {"type": "string"},
                    "passed": {"type": "boolean"},
                    "detail": {"type": "string"},
                },
            },
        },
    },
}

SCHEMAS = {
    "e1": E1_SCHEMA,
    "d1": D1_SCHEMA,
    "e2": E2_SCHEMA,
    "trees": TREES_SCHEMA,
    "dsep": DSEP_SCHEMA,
    "verify": VERIFY_SCHEMA,
}
