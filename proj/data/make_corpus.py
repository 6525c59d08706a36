#!/usr/bin/env python3
# Copyright 2026 The Semsteg Authors.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Writes the synthetic sample corpus used by the bundled distribution.

Entity popularity is Zipf-like and sentence lengths follow a fixed mix, so
the resulting type distribution is skewed the way real corpora are.

Usage: make_corpus.py tree.json > corpus.txt
"""

import json
import random
import sys

LENGTH_WEIGHTS = [(0, 14), (1, 34), (2, 30), (3, 15), (4, 6), (5, 1)]
LINES = 2400
SEED = 20260101

OPENERS = [
    "I keep thinking about {}.",
    "Yesterday someone asked me about {}.",
    "There was a long story involving {}.",
    "The notes only mentioned {}.",
    "We talked for hours about {}.",
    "My sister wrote a short poem about {}.",
]
EMPTY = [
    "The weather stayed grey and nobody left the house.",
    "It took a while, but everything worked out in the end.",
    "We laughed about it for the rest of the evening.",
    "Nothing much happened, and that was fine.",
    "The meeting ran late again.",
    "She smiled and closed the door quietly.",
]


def main():
    with open(sys.argv[1], encoding="utf-8") as f:
        nodes = json.load(f)["nodes"]
    rng = random.Random(SEED)
    order = list(range(len(nodes)))
    rng.shuffle(order)
    # Zipf-like popularity over a shuffled entity order.
    weights = [0.0] * len(nodes)
    for rank, i in enumerate(order):
        weights[i] = 1.0 / (rank + 1) ** 1.1
    lengths = [n for n, _ in LENGTH_WEIGHTS]
    length_weights = [w for _, w in LENGTH_WEIGHTS]
    for _ in range(LINES):
        k = rng.choices(lengths, length_weights)[0]
        if k == 0:
            print(rng.choice(EMPTY))
            continue
        picked = rng.choices(range(len(nodes)), weights, k=k)
        surfaces = []
        for i in picked:
            node = nodes[i]
            # Ambiguous short forms are avoided so the line means what it says.
            forms = [s for s in node["surfaces"] if s != "Washington"] or node["surfaces"]
            surfaces.append(forms[0])
        if len(surfaces) == 1:
            text = surfaces[0]
        else:
            text = ", ".join(surfaces[:-1]) + " and " + surfaces[-1]
        print(rng.choice(OPENERS).format(text))


if __name__ == "__main__":
    main()
