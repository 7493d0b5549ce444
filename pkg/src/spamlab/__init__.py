"""Spam/ham email classification: ingestion, preprocessing, three classifiers, evaluation."""

__version__ = "0.1.0"
