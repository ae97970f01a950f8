#!/usr/bin/env python3
from .params import SystemParams
from .geometry import WallRealization, PhRealization, sample_walls, sample_phs, wall_count, blockage_prob, thinned_intensity
from .channel import (GainPdfCoefficients, path_loss, sample_fading, sample_mimo_gain, gain_pdf_coeffs,
                      gain_pdf, gain_ccdf, gain_mean)
