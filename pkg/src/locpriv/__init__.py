#!/usr/bin/env python3
"""
locpriv: history-aware location-privacy release mechanisms.

A user moving on a grid releases an obfuscated cell at every step. The
package trains a release policy on the belief MDP of the observer with
advantage actor-critic, compares it with a myopic Blahut-Arimoto mechanism,
and checks the leakage accounting against exact enumeration on small
instances.
"""

__version__ = "0.1"
