# Default settings for the network growth simulator

class Config:
    # Application settings
    APP_NAME = "netgrowth"
    VERSION = "0.3.0"
    LOG_LEVEL_ENV = "NETGROWTH_LOG_LEVEL"   # Only environment variable the tool reads
    DEFAULT_LOG_LEVEL = "INFO"

    # --- Dynamics settings ---
    NU = 0.1                 # Entry rate: fraction of the current size entering each turn
    PSI = 5.0                # Activity multiplier: actions per node per turn
    KAPPA = 5                # Max edges a single node may create in one turn
    N0 = 10                  # Isolated seed nodes
    TARGET_NODES = 1000      # Stop once the node count reaches this
    SEED = 42

    # --- Rule settings ---
    # Dotted paths of the rule plugins, in activation order.
    RULE_SEQUENCE = (
        "rules.randomness.randomness_rule",
        "rules.triadic.triadic_rule",
        "rules.cumulative.cumulative_rule",
        "rules.distance.distance_rule",
    )
    P_RANDOM = 0.9
    P_TRIADIC = 0.2
    P_CUMULATIVE = 0.2
    P_DISTANCE = 0.05
    TOP_K = 20               # Size of the high in-degree list used by distance-assisted closure
    DISTANCE_CHECK = True    # Only link to top nodes within undirected distance 2
    BUDGET_SPLIT = (0.1, 0.3, 0.3, 0.3)   # randomness, triadic, cumulative, distance
    PROFILE = "all"

    # Named rule subsets used during model development
    RULE_PROFILES = {
        "all": ("randomness", "triadic", "cumulative", "distance"),
        "random_only": ("randomness",),
        "no_distance": ("randomness", "triadic", "cumulative"),
        "random_cumulative_triadic": ("randomness", "cumulative", "triadic"),
    }

    # --- Metric settings ---
    EXACT_THRESHOLD = 20000  # Above this node count paths/betweenness/closeness are sampled
    PATH_SAMPLES = 512       # BFS sources when sampling diameter and path length
    BETWEENNESS_SAMPLES = 128  # Pivots for sampled betweenness (pure-Python Brandes is the slow part)
    EIGEN_TOL = 1e-9
    EIGEN_MAX_ITER = 1000
    CHUNK_SIZE = 64          # Sources per BFS/Brandes work unit
    LOGLOG_BINS = 20         # 0 emits raw (value, frequency) points
    COMPUTE_CENTRALITIES = True

    # --- Output settings ---
    OUT_DIR = "runs"
    THREADS = 1
    FLOAT_DIGITS = 6         # Significant digits in every report

    # --- Comparison / sweep settings ---
    OBJECTIVE_EPSILON = 1e-9
    OBJECTIVE_WEIGHTS = {
        "nodes": 1.0,
        "edges": 1.0,
        "avg_degree": 1.0,
        "diameter": 1.0,
        "avg_path_length": 1.0,
        "modularity": 1.0,
        "transitivity": 0.0,
        "avg_clustering": 0.0,
    }
    SWEEP_MAX_EVALUATIONS = 100
    DEVELOPMENT_SIZES = (50, 500, 1000, 5000, 10000, 80000, 160000)
