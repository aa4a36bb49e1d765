# unit tests

import sys

sys.path.append('src')
sys.path.append('src/lib')
