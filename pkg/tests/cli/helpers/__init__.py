"""Tests for CLI helpers module."""