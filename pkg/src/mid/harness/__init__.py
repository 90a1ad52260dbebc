"""Property checks, constructions and clustering over complexity sources."""
from .cluster import LINKAGES, ClusterError, Dendrogram, cluster
from .demos import (HarnessError, additivity_demo, counterexample_strings, flip_bit, inequality_chain_check,
                    metric_check, minimal_overlap_demo, normalization_violation_demo)
from .reports import DemoReport, ViolationReport, to_json
from .sampler import ListSampler
