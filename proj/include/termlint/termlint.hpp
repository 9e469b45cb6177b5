#pragma once

#include "termlint/term.hpp"
#include "termlint/graph.hpp"
#include "termlint/program.hpp"
#include "termlint/parser.hpp"
#include "termlint/printer.hpp"
#include "termlint/unify.hpp"
#include "termlint/ranking.hpp"
#include "termlint/gamma.hpp"
#include "termlint/safety.hpp"
#include "termlint/rewrite.hpp"
#include "termlint/eval.hpp"
#include "termlint/dot.hpp"
#include "termlint/report.hpp"
