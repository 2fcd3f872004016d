#pragma once

#include "betaflow/characteristics.hpp"
#include "betaflow/closed_form.hpp"
#include "betaflow/column.hpp"
#include "betaflow/commands.hpp"
#include "betaflow/config.hpp"
#include "betaflow/constants.hpp"
#include "betaflow/errors.hpp"
#include "betaflow/fields.hpp"
#include "betaflow/finite_difference.hpp"
#include "betaflow/grid.hpp"
#include "betaflow/report.hpp"
#include "betaflow/stratification.hpp"
#include "betaflow/verifier.hpp"
