"""Benchmark values reported for the original full-scale system.

These numbers were measured on restricted clinical data with trained
neural encoders and are NOT reproducible with this toolkit alone; they
are kept as reference constants for display next to locally computed
results.  What this package can verify at desk scale is covered by the
acceptance suite: exactness of retrieval, the diff scorer against
enumeration, the published removal examples, and the metric property
suites.
"""

# Retrieval-composite evaluation on the expert-edited test set (best
# value per metric across retrieval settings).
REPORTED_EMBED_SCORE_BEST = 0.2351   # sentence composite, k = 2
REPORTED_SEMB_BEST = 0.3967          # sentence composite, k = 1
REPORTED_ENTITY_F1_BEST = 0.1112     # sentence composite, k = 3

# Removal-method quality on the held-out shared corpus.
REPORTED_SENTENCE_FLAGGER_ACCURACY = 0.907
REPORTED_REWRITE_PIPELINE_F1 = 0.56
REPORTED_TOKEN_REMOVAL_F1 = 0.84

# Corpus-scale keyword reduction achieved by token removal.
REPORTED_KEYWORD_INSTANCES_BEFORE = 259376
REPORTED_KEYWORD_INSTANCES_AFTER = 82074
REPORTED_KEYWORD_REDUCTION = 1 - REPORTED_KEYWORD_INSTANCES_AFTER / REPORTED_KEYWORD_INSTANCES_BEFORE

# Projected endpoint cost with and without sentence filtering.
REPORTED_UNFILTERED_COST_USD = 92000
REPORTED_FILTERED_COST_USD = 16560
