#ifndef GDV_GDV_HPP
#define GDV_GDV_HPP

#include "gdv/core.hpp"
#include "gdv/good_deal.hpp"
#include "gdv/indifference.hpp"
#include "gdv/market.hpp"
#include "gdv/risk_measure.hpp"
#include "gdv/shortfall.hpp"
#include "gdv/superhedge.hpp"

#endif  // GDV_GDV_HPP
