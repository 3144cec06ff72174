#pragma once

#include <spinlab/core/rational.hpp>
#include <spinlab/core/interval.hpp>
#include <spinlab/core/multi_index.hpp>
#include <spinlab/core/parity_map.hpp>
#include <spinlab/core/weighted_graph.hpp>
#include <spinlab/core/polynomial.hpp>
#include <spinlab/core/random.hpp>
#include <spinlab/core/hash.hpp>
#include <spinlab/linalg/rational_matrix.hpp>
#include <spinlab/moments/moments.hpp>
#include <spinlab/kirchhoff/kirchhoff.hpp>
#include <spinlab/stabledet/ensemble.hpp>
#include <spinlab/stabledet/pgg.hpp>
#include <spinlab/stabledet/wick.hpp>
#include <spinlab/stabledet/hirota.hpp>
#include <spinlab/stabledet/battery.hpp>
#include <spinlab/inequalities/oracle.hpp>
#include <spinlab/inequalities/inequalities.hpp>
#include <spinlab/inequalities/hunt.hpp>
#include <spinlab/inequalities/switching.hpp>
#include <spinlab/inequalities/interacting.hpp>
#include <spinlab/asymptotics/asymptotics.hpp>
#include <spinlab/io/json.hpp>
