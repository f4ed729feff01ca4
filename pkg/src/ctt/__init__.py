"""Classical type theory toolkit: a simplified lambda-mu calculus with its
ranked nested-Boolean semantics, and the matching ranked sequent calculus."""

__version__ = "0.1.0"
