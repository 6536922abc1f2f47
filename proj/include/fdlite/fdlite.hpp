#ifndef FDLITE_FDLITE_HPP
#define FDLITE_FDLITE_HPP

#include "fdlite/answering.hpp"
#include "fdlite/canonical.hpp"
#include "fdlite/degree.hpp"
#include "fdlite/evaluator.hpp"
#include "fdlite/hardness.hpp"
#include "fdlite/ontology.hpp"
#include "fdlite/parser.hpp"
#include "fdlite/query.hpp"
#include "fdlite/rewriter.hpp"
#include "fdlite/tnorm.hpp"

#endif
