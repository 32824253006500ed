"""Adiabatic sweeps through first- and second-order quantum phase transitions
under weak environmental coupling: spectra, schedules, bath spectral
functions, response-theory excitation amplitudes and scaling studies."""

__version__ = "0.1.0"
