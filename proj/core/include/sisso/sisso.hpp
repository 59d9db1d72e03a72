// Copyright 2026 The sisso-cpp Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "sisso/combinatorics.hpp"
#include "sisso/config.hpp"
#include "sisso/dataset.hpp"
#include "sisso/error.hpp"
#include "sisso/expression.hpp"
#include "sisso/feature_space.hpp"
#include "sisso/l0.hpp"
#include "sisso/model.hpp"
#include "sisso/operators.hpp"
#include "sisso/pipeline.hpp"
#include "sisso/screening.hpp"
#include "sisso/synthetic.hpp"
#include "sisso/unit.hpp"
