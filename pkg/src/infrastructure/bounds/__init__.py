"""Closed-form VC and transductive Rademacher complexity bounds."""
