from sp4_building_zeta.exactring import *
from sp4_building_zeta.localgroup import *
from sp4_building_zeta.latticegeo import *
from sp4_building_zeta.cosetver import *
from sp4_building_zeta.reptheory import *
from sp4_building_zeta.zetaeng import *
from sp4_building_zeta.plotly_misc import *
from sp4_building_zeta.plot_subcomponents import *
from sp4_building_zeta.spectrum_plots import *

import plotly.offline as pyo

# this command enables figures in jupyter notebook
if in_notebook():
    pyo.init_notebook_mode(connected=True)
