# Copyright 2026 The hmmu Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
# http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Python bindings for the hmmu MMU simulator and design-space explorer."""

from ._core import (
    DataError,
    Tlb,
    UsageError,
    accelerated_fraction,
    amdahl_bound,
    apply_pattern,
    config_counts,
    default_params,
    format_trace,
    generate_trace,
    identify_hotspots,
    pareto_front,
    parse_trace,
    simulate_local,
    sweep,
    vpn_of,
)

__all__ = [
    "DataError",
    "Tlb",
    "UsageError",
    "accelerated_fraction",
    "amdahl_bound",
    "apply_pattern",
    "config_counts",
    "default_params",
    "format_trace",
    "generate_trace",
    "identify_hotspots",
    "pareto_front",
    "parse_trace",
    "simulate_local",
    "sweep",
    "vpn_of",
]
