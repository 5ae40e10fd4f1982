#pragma once

#include "corona/certify.hpp"
#include "corona/farey_walk.hpp"
#include "corona/group_measure.hpp"
#include "corona/higson.hpp"
#include "corona/integer.hpp"
#include "corona/modular_group.hpp"
#include "corona/oracles.hpp"
#include "corona/parallel.hpp"
#include "corona/projective_line.hpp"
#include "corona/report.hpp"
#include "corona/signature_engine.hpp"
#include "corona/suites.hpp"
#include "corona/sweep.hpp"
#include "corona/witness.hpp"
#include "corona/zeta_builder.hpp"
