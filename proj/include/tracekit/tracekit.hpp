#pragma once

// Everything in one include.
#include "tracekit/error.hpp"
#include "tracekit/trace/alphabet.hpp"
#include "tracekit/trace/trace.hpp"
#include "tracekit/trace/poset.hpp"
#include "tracekit/monoid/transformation.hpp"
#include "tracekit/monoid/monoid.hpp"
#include "tracekit/monoid/atm.hpp"
#include "tracekit/monoid/morphism.hpp"
#include "tracekit/monoid/wreath.hpp"
#include "tracekit/automaton/automaton.hpp"
#include "tracekit/automaton/run.hpp"
#include "tracekit/cascade/cascade.hpp"
#include "tracekit/cascade/gcs.hpp"
#include "tracekit/cascade/detector.hpp"
#include "tracekit/gossip/gossip.hpp"
#include "tracekit/loctl/formula.hpp"
#include "tracekit/loctl/parser.hpp"
#include "tracekit/loctl/eval.hpp"
#include "tracekit/loctl/transforms.hpp"
#include "tracekit/loctl/reset_chain.hpp"
#include "tracekit/loctl/compile.hpp"
#include "tracekit/loctl/decompile.hpp"
#include "tracekit/krohn_rhodes.hpp"
#include "tracekit/io/formats.hpp"
#include "tracekit/io/export.hpp"
#include "tracekit/io/dot.hpp"
