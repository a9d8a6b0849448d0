#pragma once

#include "hyperqsat/bench.hpp"
#include "hyperqsat/dpll.hpp"
#include "hyperqsat/engine.hpp"
#include "hyperqsat/eval.hpp"
#include "hyperqsat/formula.hpp"
#include "hyperqsat/parse.hpp"
#include "hyperqsat/print.hpp"
#include "hyperqsat/prop.hpp"
#include "hyperqsat/qbf.hpp"
#include "hyperqsat/qdimacs.hpp"
#include "hyperqsat/random.hpp"
#include "hyperqsat/solve.hpp"
#include "hyperqsat/trace.hpp"
#include "hyperqsat/transform.hpp"
#include "hyperqsat/unroll.hpp"
