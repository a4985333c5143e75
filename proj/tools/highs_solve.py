#!/usr/bin/env python3
# Copyright 2026 The CLCR Authors
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

"""Solves an MPS file with HiGHS and prints the solver log to stdout."""

import argparse
import sys

import highspy


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("instance")
    parser.add_argument("--time-limit", type=float, default=600.0)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--threads", type=int, default=1)
    args = parser.parse_args()

    h = highspy.Highs()
    h.setOptionValue("output_flag", True)
    h.setOptionValue("log_to_console", True)
    h.setOptionValue("time_limit", args.time_limit)
    h.setOptionValue("random_seed", args.seed % 2147483647)
    h.setOptionValue("threads", args.threads)
    if h.readModel(args.instance) != highspy.HighsStatus.kOk:
        print("failed to read model", file=sys.stderr)
        return 2
    h.run()
    sys.stdout.flush()
    return 0


if __name__ == "__main__":
    sys.exit(main())
