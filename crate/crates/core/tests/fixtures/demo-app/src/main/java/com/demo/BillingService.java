package com.demo;

import org.slf4j.Logger;
import org.slf4j.LoggerFactory;

public class BillingService {
    private static final Logger logger = LoggerFactory.getLogger(BillingService.class);

    public boolean charge(String creditCardNumber, String firstName, long cents) {
        logger.info(firstName);
        logger.info(creditCardNumber);
        return MathUtil.isPositive(cents);
    }
}
