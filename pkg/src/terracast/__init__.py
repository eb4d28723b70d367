"""Toolkit for predicting sparse spatio-temporal conflict intensity.

Pipeline stages: synthetic landscape/event generation, event ingest and
cleaning, region clustering and graph embeddings, overlapping-grid tile
datasets, CNN and baseline training, curriculum/hierarchical strategies,
and evaluation/map emission.
"""

__version__ = "0.1.0"
