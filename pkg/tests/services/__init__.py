"""Tests for service layer."""