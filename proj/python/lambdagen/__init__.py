try:
    # installed layout: the extension lives inside the package
    from ._lambdagen import (
        BinaryTree,
        ClosedSampler,
        Combinator,
        CountTable,
        LambdagenError,
        RecursiveSampler,
        SizeModel,
        Term,
        app,
        calibrate_binary_tree,
        calibrate_binary_tree_decimal,
        calibrate_terms,
        catalan,
        count_table,
        enumerate_terms,
        index,
        infer_type,
        lam,
        remy_tree,
        sample_typed,
        sk_combinator,
        tune,
        tuned_sampler,
    )
except ImportError:
    # in-tree layout: the extension sits on sys.path next to the build
    from _lambdagen import (
        BinaryTree,
        ClosedSampler,
        Combinator,
        CountTable,
        LambdagenError,
        RecursiveSampler,
        SizeModel,
        Term,
        app,
        calibrate_binary_tree,
        calibrate_binary_tree_decimal,
        calibrate_terms,
        catalan,
        count_table,
        enumerate_terms,
        index,
        infer_type,
        lam,
        remy_tree,
        sample_typed,
        sk_combinator,
        tune,
        tuned_sampler,
    )

__all__ = [
    "BinaryTree",
    "ClosedSampler",
    "Combinator",
    "CountTable",
    "LambdagenError",
    "RecursiveSampler",
    "SizeModel",
    "Term",
    "app",
    "calibrate_binary_tree",
    "calibrate_binary_tree_decimal",
    "calibrate_terms",
    "catalan",
    "count_table",
    "enumerate_terms",
    "index",
    "infer_type",
    "lam",
    "remy_tree",
    "sample_typed",
    "sk_combinator",
    "tune",
    "tuned_sampler",
]

__version__ = "0.1.0"
