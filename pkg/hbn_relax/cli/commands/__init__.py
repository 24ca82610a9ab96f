"""Commands of the hbn-relax CLI."""
