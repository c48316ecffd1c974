"""Reaction-diffusion level set evolution."""
