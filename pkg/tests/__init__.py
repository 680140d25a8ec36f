"""Tests for AI Academician."""
