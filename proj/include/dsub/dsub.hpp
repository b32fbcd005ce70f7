#pragma once

#include "dsub/errors.hpp"
#include "dsub/syntax.hpp"
#include "dsub/parser.hpp"
#include "dsub/environment.hpp"
#include "dsub/judgment.hpp"
#include "dsub/exposure.hpp"
#include "dsub/bounds_shift.hpp"
#include "dsub/step.hpp"
#include "dsub/declarative.hpp"
#include "dsub/decl_search.hpp"
#include "dsub/json_io.hpp"
#include "dsub/enumerate.hpp"
#include "dsub/metatheory_lab.hpp"
#include "dsub/dotty_model.hpp"
#include "dsub/corpus.hpp"
#include "dsub/cli.hpp"
